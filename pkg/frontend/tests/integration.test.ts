import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReaderController } from "../src/controller.js";

/** End-to-end run against a live service. Skipped unless ONTOREC_SERVICE_URL
 * points at a running instance (e.g. `ontorec --store DIR serve`); the test
 * creates its own user and articles, so a fresh sample store is fine. */

const base = process.env.ONTOREC_SERVICE_URL;
const uid = `itest-${Date.now()}`;
const date = "2011-03-01";

async function post(path: string, body: unknown) {
  const res = await fetch(base + path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!res.ok) throw new Error(`${path}: ${res.status} ${await res.text()}`);
  return res.json();
}

describe.skipIf(!base)("live service loop", () => {
  it("open fires one opened signal; +1 round-trips; order is server-authoritative", async () => {
    await post(`/users/${uid}/profile`, {
      seeds: ["domain:EconomicEvent", "domain:AgriFoodSector"],
    });
    const bodies = [
      "Le tramway de Dijon avance tranquillement",
      "Rachat de la Banque de Bourgogne à Dijon",
      "Faillite d'une fromagerie en Bourgogne",
      "Reprise de la Fromagerie Delin",
    ];
    for (let i = 0; i < bodies.length; i++) {
      await post("/articles", {
        id: `${uid}-art-${i}`,
        title: `Article ${i}`,
        body: bodies[i],
        publishedDate: date,
      });
    }

    const api = new ApiClient(base!);
    const controller = new ReaderController(api, uid, date);
    await controller.loadReview();
    const displayed = controller.state.review!.items.map((it) => it.articleId);
    expect(displayed.length).toBeGreaterThan(0);

    // Displayed order equals service order, which is (-score, articleId).
    const serverReview = await api.getReview(uid, date);
    expect(displayed).toEqual(serverReview.items.map((it) => it.articleId));
    const resorted = [...serverReview.items].sort(
      (a, b) => b.score - a.score || a.articleId.localeCompare(b.articleId),
    );
    expect(serverReview.items).toEqual(resorted);

    // Opening fires exactly one opened signal, visible in the history.
    const target = displayed[displayed.length - 1];
    await controller.openArticle(target);
    controller.closeArticle();
    await controller.openArticle(target);
    let profile = await api.getProfile(uid);
    const opened = (profile.history as Array<Record<string, unknown>>).filter(
      (e) => e.signal === "opened" && e.articleId === target,
    );
    expect(opened).toHaveLength(1);

    // A +1 round-trips: one explicit event lands, the controller refetches,
    // and what it displays matches a fresh server fetch exactly.
    await controller.rate(target, 1);
    await new Promise((r) => setTimeout(r, 200));
    profile = await api.getProfile(uid);
    const explicit = (profile.history as Array<Record<string, unknown>>).filter(
      (e) => e.kind === "explicit" && e.articleId === target,
    );
    expect(explicit).toHaveLength(1);
    const fresh = await api.getReview(uid, date);
    expect(controller.state.review!.items.map((it) => it.articleId)).toEqual(
      fresh.items.map((it) => it.articleId),
    );
    expect(controller.state.review!.items.find((it) => it.articleId === target)?.readState).toBe(
      "rated",
    );
  });
});
