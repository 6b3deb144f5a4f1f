import type { FetchLike } from "../src/api.js";

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export type Route = (call: RecordedCall) => { status?: number; json: unknown };

/** A scriptable fetch: routes are matched by substring, calls recorded. */
export function mockFetch(routes: Array<[string, Route]>) {
  const calls: RecordedCall[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const call: RecordedCall = {
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    };
    calls.push(call);
    for (const [needle, route] of routes) {
      if (url.includes(needle)) {
        const { status = 200, json } = route(call);
        return new Response(JSON.stringify(json), {
          status,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    return new Response(JSON.stringify({ code: "UnknownRoute", message: url }), {
      status: 404,
    });
  };
  return { fetchImpl, calls };
}

export function reviewWire(items: Array<[string, number]>, date = "2011-01-12") {
  return {
    userId: "alice",
    date,
    items: items.map(([articleId, score]) => ({
      articleId,
      score,
      title: `Title of ${articleId}`,
    })),
    k: 20,
    threshold: 0.05,
  };
}

export function profileWire(vector: Record<string, number>) {
  return {
    userId: "alice",
    seeds: Object.keys(vector),
    vector,
    labels: {},
    history: [],
    updatedAt: "",
  };
}
