import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReaderController } from "../src/controller.js";
import { DwellTracker } from "../src/dwell.js";
import { mockFetch, profileWire, reviewWire, type RecordedCall } from "./helpers.js";

function feedbackCalls(calls: RecordedCall[]) {
  return calls.filter((c) => c.url.includes("/feedback")).map((c) => c.body) as Array<
    Record<string, unknown>
  >;
}

function makeController(routes: Parameters<typeof mockFetch>[0]) {
  const { fetchImpl, calls } = mockFetch(routes);
  const api = new ApiClient("http://svc", fetchImpl);
  const controller = new ReaderController(api, "alice", "2011-01-12");
  return { controller, calls };
}

const defaultRoutes = (
  review = () => reviewWire([["art-002", 0.8], ["art-001", 0.3]]),
): Parameters<typeof mockFetch>[0] => [
  ["/review", () => ({ json: review() })],
  ["/feedback", () => ({ json: profileWire({ "domain:Bank": 1 }) })],
  ["/profile", () => ({ json: profileWire({ "domain:Bank": 1 }) })],
];

describe("loadReview", () => {
  it("renders items in service order, untouched", async () => {
    const { controller } = makeController(defaultRoutes());
    await controller.loadReview();
    expect(controller.state.review?.items.map((it) => it.articleId)).toEqual([
      "art-002",
      "art-001",
    ]);
    expect(controller.state.banner).toBeNull();
  });

  it("shows the empty state when the review has no items", async () => {
    const { controller } = makeController(defaultRoutes(() => reviewWire([])));
    await controller.loadReview();
    expect(controller.state.review?.items).toEqual([]);
  });

  it("surfaces the service error body in the banner", async () => {
    const { controller } = makeController([
      ["/review", () => ({ status: 404, json: { code: "UnknownUser", message: "no such user: alice" } })],
      ["/profile", () => ({ json: profileWire({ a: 1 }) })],
    ]);
    await controller.loadReview();
    expect(controller.state.banner).toEqual({
      code: "UnknownUser",
      message: "no such user: alice",
    });
  });
});

describe("openArticle", () => {
  it("fires exactly one opened signal per article", async () => {
    const { controller, calls } = makeController(defaultRoutes());
    await controller.loadReview();
    await controller.openArticle("art-002");
    controller.closeArticle();
    await controller.openArticle("art-002"); // reopened: no second signal
    const fb = feedbackCalls(calls);
    // The instant close also fires a (correct) skipped signal; the point
    // here is that opened fires exactly once across open/close/reopen.
    expect(fb.filter((c) => c.signal === "opened")).toEqual([
      { articleId: "art-002", kind: "implicit", signal: "opened" },
    ]);
    expect(controller.state.review?.items[0].readState).toBe("opened");
  });

  it("opening while already open is a no-op", async () => {
    const { controller, calls } = makeController(defaultRoutes());
    await controller.loadReview();
    await controller.openArticle("art-002");
    await controller.openArticle("art-002");
    expect(feedbackCalls(calls)).toHaveLength(1);
  });

  it("routes dwell signals through the feedback endpoint", async () => {
    let emitSignal: (s: "readLong" | "skipped") => void = () => {};
    const { fetchImpl, calls } = mockFetch(defaultRoutes());
    const api = new ApiClient("http://svc", fetchImpl);
    const controller = new ReaderController(
      api,
      "alice",
      "2011-01-12",
      () => {},
      { skipMs: 5000, readLongMs: 30000 },
      (emit, config) => {
        emitSignal = emit;
        return new DwellTracker(emit, config);
      },
    );
    await controller.loadReview();
    await controller.openArticle("art-001");
    emitSignal("readLong");
    await new Promise((r) => setTimeout(r, 0));
    expect(feedbackCalls(calls)).toContainEqual({
      articleId: "art-001",
      kind: "implicit",
      signal: "readLong",
    });
  });
});

describe("rate", () => {
  it("posts the rating, marks the item rated, and refetches server truth", async () => {
    let rated = false;
    const { controller, calls } = makeController([
      ["/review", () => ({
        json: rated
          ? reviewWire([["art-001", 0.9], ["art-002", 0.4]])
          : reviewWire([["art-002", 0.8], ["art-001", 0.3]]),
      })],
      ["/feedback", () => {
        rated = true;
        return { json: profileWire({ "domain:Bank": 1 }) };
      }],
      ["/profile", () => ({ json: profileWire({ "domain:Bank": 1 }) })],
    ]);
    await controller.loadReview();
    await controller.rate("art-001", 1);
    await new Promise((r) => setTimeout(r, 0));
    expect(feedbackCalls(calls)).toEqual([
      { articleId: "art-001", kind: "explicit", rating: 1 },
    ]);
    // The refetched (server-reordered) review is displayed as-is, and the
    // rated state survives the reorder.
    expect(
      controller.state.review?.items.map((it) => [it.articleId, it.readState]),
    ).toEqual([
      ["art-001", "rated"],
      ["art-002", "unread"],
    ]);
  });

  it("debounces a double-click into one POST", async () => {
    const { controller, calls } = makeController(defaultRoutes());
    await controller.loadReview();
    const a = controller.rate("art-001", 1);
    const b = controller.rate("art-001", 1);
    await Promise.all([a, b]);
    expect(feedbackCalls(calls).filter((c) => c.kind === "explicit")).toHaveLength(1);
  });

  it("leaves readState unchanged and offers retry when the POST fails", async () => {
    let fail = true;
    const { controller, calls } = makeController([
      ["/review", () => ({ json: reviewWire([["art-001", 0.3]]) })],
      ["/feedback", () => (fail
        ? { status: 503, json: { code: "Unavailable", message: "down" } }
        : { json: profileWire({ "domain:Bank": 1 }) })],
      ["/profile", () => ({ json: profileWire({ "domain:Bank": 1 }) })],
    ]);
    await controller.loadReview();
    await controller.rate("art-001", 1);
    expect(controller.state.review?.items[0].readState).toBe("unread");
    expect(controller.state.failedRatings.get("art-001")).toBe(1);
    expect(controller.state.banner?.code).toBe("Unavailable");
    fail = false;
    await controller.retryRating("art-001");
    await new Promise((r) => setTimeout(r, 0));
    expect(controller.state.review?.items[0].readState).toBe("rated");
    expect(controller.state.failedRatings.size).toBe(0);
    expect(feedbackCalls(calls).filter((c) => c.kind === "explicit")).toHaveLength(2);
  });
});
