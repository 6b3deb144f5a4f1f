import { ApiClient, ApiError } from "./api.js";
import { DEFAULT_DWELL, DwellConfig, DwellTracker } from "./dwell.js";
import { toProfileViewModel, toReviewViewModel } from "./viewmodel.js";
import type {
  ErrorBody,
  FeedbackBody,
  ProfileViewModel,
  ReviewViewModel,
} from "./types.js";

export interface ReaderState {
  userId: string;
  date: string;
  review: ReviewViewModel | null;
  profile: ProfileViewModel | null;
  openArticleId: string | null;
  /** Ratings whose POST failed and can be retried, per article. */
  failedRatings: Map<string, -1 | 1>;
  banner: ErrorBody | null;
}

/** Drives the read-rate-refresh loop. Rendering is someone else's job: the
 * controller only mutates state and calls `onChange`. All ordering and
 * scoring comes from the service; the client never recomputes either. */
export class ReaderController {
  readonly state: ReaderState;
  private dwell: DwellTracker | null = null;
  // Per-article promise chain: at most one in-flight feedback POST per
  // article, later actions queue behind it.
  private feedbackChains = new Map<string, Promise<void>>();
  private pendingRatings = new Map<string, -1 | 1>();

  constructor(
    private readonly api: ApiClient,
    userId: string,
    date: string,
    private readonly onChange: () => void = () => {},
    private readonly dwellConfig: DwellConfig = DEFAULT_DWELL,
    private readonly makeTracker: (
      emit: (signal: "readLong" | "skipped") => void,
      config: DwellConfig,
    ) => DwellTracker = (emit, config) => new DwellTracker(emit, config),
  ) {
    this.state = {
      userId,
      date,
      review: null,
      profile: null,
      openArticleId: null,
      failedRatings: new Map(),
      banner: null,
    };
  }

  private fail(err: unknown): void {
    this.state.banner =
      err instanceof ApiError
        ? err.body
        : { code: "NetworkError", message: String(err) };
    this.onChange();
  }

  async loadReview(): Promise<void> {
    try {
      const [review, profile] = await Promise.all([
        this.api.getReview(this.state.userId, this.state.date),
        this.api.getProfile(this.state.userId),
      ]);
      this.state.review = toReviewViewModel(review, this.state.review ?? undefined);
      this.state.profile = toProfileViewModel(profile);
      this.state.banner = null;
    } catch (err) {
      this.fail(err);
      return;
    }
    this.onChange();
  }

  private enqueueFeedback(
    articleId: string,
    body: FeedbackBody,
    after: (ok: boolean) => void,
  ): Promise<void> {
    const prev = this.feedbackChains.get(articleId) ?? Promise.resolve();
    const next = prev.then(async () => {
      try {
        await this.api.postFeedback(this.state.userId, body);
        after(true);
      } catch (err) {
        if (body.kind === "explicit") this.fail(err);
        // Implicit signals are dropped silently (documented limitation).
        after(false);
      }
    });
    this.feedbackChains.set(articleId, next);
    return next;
  }

  private item(articleId: string) {
    return this.state.review?.items.find((it) => it.articleId === articleId);
  }

  /** Opening fires exactly one `opened` signal, the first time only. */
  openArticle(articleId: string): Promise<void> {
    if (this.state.openArticleId === articleId) return Promise.resolve();
    this.closeArticle();
    const item = this.item(articleId);
    if (!item) return Promise.resolve();
    this.state.openArticleId = articleId;
    const firstOpen = item.readState === "unread";
    if (item.readState === "unread") item.readState = "opened";
    this.dwell = this.makeTracker(
      (signal) =>
        this.enqueueFeedback(articleId, { articleId, kind: "implicit", signal }, () => {}),
      this.dwellConfig,
    );
    this.dwell.open();
    this.onChange();
    if (!firstOpen) return Promise.resolve();
    return this.enqueueFeedback(
      articleId,
      { articleId, kind: "implicit", signal: "opened" },
      () => {},
    );
  }

  closeArticle(): void {
    if (this.state.openArticleId === null) return;
    this.dwell?.close();
    this.dwell = null;
    this.state.openArticleId = null;
    this.onChange();
  }

  articleHidden(): void {
    this.dwell?.hide();
  }

  articleVisible(): void {
    this.dwell?.show();
  }

  /** Debounced: a rating identical to one already in flight for the same
   * article is dropped. On success the item is marked rated and profile +
   * review are refetched from the server; on failure the read state is left
   * unchanged and the rating is parked for retry. */
  rate(articleId: string, rating: -1 | 1): Promise<void> {
    if (this.pendingRatings.get(articleId) === rating) return Promise.resolve();
    const item = this.item(articleId);
    if (!item) return Promise.resolve();
    this.pendingRatings.set(articleId, rating);
    this.state.failedRatings.delete(articleId);
    return this.enqueueFeedback(
      articleId,
      { articleId, kind: "explicit", rating },
      (ok) => {
        this.pendingRatings.delete(articleId);
        if (ok) {
          item.readState = "rated";
          void this.loadReview();
        } else {
          this.state.failedRatings.set(articleId, rating);
        }
        this.onChange();
      },
    );
  }

  retryRating(articleId: string): Promise<void> {
    const rating = this.state.failedRatings.get(articleId);
    if (rating === undefined) return Promise.resolve();
    this.state.failedRatings.delete(articleId);
    return this.rate(articleId, rating);
  }
}
