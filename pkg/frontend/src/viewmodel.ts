import type {
  ProfileViewModel,
  ProfileWire,
  ReadState,
  ReviewViewModel,
  ReviewWire,
} from "./types.js";

/** Items stay exactly in service order — the client never reorders or
 * rescores. Read states carry over from the previous view model so a
 * refetch doesn't forget what the user already opened or rated. */
export function toReviewViewModel(
  wire: ReviewWire,
  previous?: ReviewViewModel,
): ReviewViewModel {
  const remembered = new Map<string, ReadState>(
    (previous?.items ?? []).map((it) => [it.articleId, it.readState]),
  );
  return {
    date: wire.date,
    items: wire.items.map((it) => ({
      ...it,
      readState: remembered.get(it.articleId) ?? "unread",
    })),
  };
}

export function toProfileViewModel(wire: ProfileWire): ProfileViewModel {
  const labels = wire.labels ?? {};
  const weights = Object.entries(wire.vector)
    .map(([concept, weight]) => ({
      concept,
      label: labels[concept] ?? concept,
      weight,
    }))
    .sort((a, b) => b.weight - a.weight || a.concept.localeCompare(b.concept));
  const sumSq = weights.reduce((acc, w) => acc + w.weight * w.weight, 0);
  return {
    userId: wire.userId,
    weights,
    normOk: Math.abs(sumSq - 1) <= 1e-6,
  };
}
