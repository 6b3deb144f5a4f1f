import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { mockFetch, profileWire, reviewWire } from "./helpers.js";

describe("ApiClient", () => {
  it("builds the review URL with encoded user and date", async () => {
    const { fetchImpl, calls } = mockFetch([
      ["/review", () => ({ json: reviewWire([["art-001", 0.5]]) })],
    ]);
    const api = new ApiClient("http://svc", fetchImpl);
    const review = await api.getReview("user one", "2011-01-12");
    expect(calls[0].url).toBe("http://svc/users/user%20one/review?date=2011-01-12");
    expect(review.items).toHaveLength(1);
  });

  it("posts feedback as JSON", async () => {
    const { fetchImpl, calls } = mockFetch([
      ["/feedback", () => ({ json: profileWire({ "domain:Bank": 1 }) })],
    ]);
    const api = new ApiClient("http://svc", fetchImpl);
    await api.postFeedback("alice", {
      articleId: "art-001",
      kind: "explicit",
      rating: 1,
    });
    expect(calls[0].method).toBe("POST");
    expect(calls[0].body).toEqual({ articleId: "art-001", kind: "explicit", rating: 1 });
  });

  it("surfaces service error bodies verbatim", async () => {
    const { fetchImpl } = mockFetch([
      ["/profile", () => ({ status: 404, json: { code: "UnknownUser", message: "no such user: ghost" } })],
    ]);
    const api = new ApiClient("http://svc", fetchImpl);
    const err = await api.getProfile("ghost").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.body).toEqual({ code: "UnknownUser", message: "no such user: ghost" });
  });
});
