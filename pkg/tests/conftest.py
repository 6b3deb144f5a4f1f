import pytest

from ontorec import sample


@pytest.fixture()
def kb():
    return sample.build_sample_kb()


@pytest.fixture()
def lexicon():
    return sample.sample_lexicon()


@pytest.fixture()
def rules():
    return sample.sample_rules()
