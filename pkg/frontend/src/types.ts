// Wire types, mirroring the service JSON exactly.

export interface ReviewItemWire {
  articleId: string;
  score: number;
  title: string;
}

export interface ReviewWire {
  userId: string;
  date: string;
  items: ReviewItemWire[];
  k: number;
  threshold: number;
}

export interface ProfileWire {
  userId: string;
  seeds: string[];
  vector: Record<string, number>;
  labels?: Record<string, string>;
  history: unknown[];
  updatedAt: string;
}

export interface ArticleWire {
  id: string;
  title: string;
  body: string;
  publishedDate: string;
}

export type FeedbackBody =
  | { articleId: string; kind: "explicit"; rating: -1 | 1 }
  | { articleId: string; kind: "implicit"; signal: "opened" | "readLong" | "skipped" };

export interface ErrorBody {
  code: string;
  message: string;
}

export type ReadState = "unread" | "opened" | "rated";

export interface ReviewItemVM extends ReviewItemWire {
  readState: ReadState;
}

export interface ReviewViewModel {
  date: string;
  items: ReviewItemVM[];
}

export interface ProfileWeight {
  concept: string;
  label: string;
  weight: number;
}

export interface ProfileViewModel {
  userId: string;
  weights: ProfileWeight[]; // sorted descending by weight
  normOk: boolean; // sum of squares within 1e-6 of 1
}
