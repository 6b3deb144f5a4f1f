import { ApiClient } from "./api.js";
import { ReaderController } from "./controller.js";

/** Minimal DOM shell: user switcher, review list, article pane, profile
 * panel. All state lives in the controller; this file only renders it. */

function el(tag: string, cls: string, text = ""): HTMLElement {
  const node = document.createElement(tag);
  node.className = cls;
  if (text) node.textContent = text;
  return node;
}

export function mount(root: HTMLElement, baseUrl: string): void {
  const api = new ApiClient(baseUrl);
  const today = new Date().toISOString().slice(0, 10);

  const header = el("div", "header");
  const userInput = document.createElement("input");
  userInput.value = "alice";
  const dateInput = document.createElement("input");
  dateInput.value = today;
  const loadBtn = el("button", "load", "Load review") as HTMLButtonElement;
  header.append(userInput, dateInput, loadBtn);

  const banner = el("div", "banner");
  const list = el("ul", "review");
  const article = el("div", "article");
  const profile = el("div", "profile");
  root.append(header, banner, list, article, profile);

  let controller = makeController();

  function makeController(): ReaderController {
    return new ReaderController(api, userInput.value, dateInput.value, render);
  }

  function render(): void {
    const s = controller.state;
    banner.textContent = s.banner ? `${s.banner.code}: ${s.banner.message}` : "";
    list.replaceChildren();
    if (s.review && s.review.items.length === 0) {
      list.append(el("li", "empty", "no relevant articles today"));
    }
    for (const item of s.review?.items ?? []) {
      const row = el("li", `item ${item.readState}`);
      row.append(
        el("span", "score", item.score.toFixed(3)),
        el("span", "title", item.title || item.articleId),
      );
      row.addEventListener("click", () => void controller.openArticle(item.articleId));
      const up = el("button", "up", "+1");
      up.addEventListener("click", (e) => {
        e.stopPropagation();
        void controller.rate(item.articleId, 1);
      });
      const down = el("button", "down", "−1");
      down.addEventListener("click", (e) => {
        e.stopPropagation();
        void controller.rate(item.articleId, -1);
      });
      row.append(up, down);
      if (s.failedRatings.has(item.articleId)) {
        const retry = el("button", "retry", "retry rating");
        retry.addEventListener("click", (e) => {
          e.stopPropagation();
          void controller.retryRating(item.articleId);
        });
        row.append(retry);
      }
      list.append(row);
    }
    article.textContent = s.openArticleId ? `reading ${s.openArticleId}` : "";
    profile.replaceChildren(el("h3", "", "Profile weights"));
    for (const w of s.profile?.weights ?? []) {
      profile.append(el("div", "weight", `${w.weight.toFixed(3)}  ${w.label}`));
    }
  }

  loadBtn.addEventListener("click", () => {
    controller.closeArticle();
    controller = makeController();
    void controller.loadReview();
  });
  document.addEventListener("visibilitychange", () => {
    if (document.hidden) controller.articleHidden();
    else controller.articleVisible();
  });

  void controller.loadReview();
}
