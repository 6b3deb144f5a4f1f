import type {
  ArticleWire,
  ErrorBody,
  FeedbackBody,
  ProfileWire,
  ReviewWire,
} from "./types.js";

/** A non-2xx response; carries the service's {code, message} body verbatim
 * so the UI can surface it in the error banner. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const body = await res.json();
    if (!res.ok) {
      throw new ApiError(res.status, body as ErrorBody);
    }
    return body as T;
  }

  getReview(userId: string, date: string): Promise<ReviewWire> {
    const u = encodeURIComponent(userId);
    return this.request(`/users/${u}/review?date=${encodeURIComponent(date)}`);
  }

  getProfile(userId: string): Promise<ProfileWire> {
    return this.request(`/users/${encodeURIComponent(userId)}/profile`);
  }

  getArticle(articleId: string): Promise<ArticleWire> {
    return this.request(`/articles/${encodeURIComponent(articleId)}`);
  }

  postFeedback(userId: string, body: FeedbackBody): Promise<ProfileWire> {
    return this.request(`/users/${encodeURIComponent(userId)}/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
