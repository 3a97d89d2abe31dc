/** Browser bootstrap: hash router plus event delegation over the markup
 * produced by render.ts. All state and API traffic live in the
 * controllers; this file only moves strings into the DOM.
 */

import { ApiClient } from "./api.js";
import { DetailController, ListController } from "./controller.js";
import {
  renderDetail,
  renderErrorBanner,
  renderFilters,
  renderForecastTable,
  renderNotFound,
} from "./render.js";
import { apiBase, setApiBase, setUserName, userName } from "./settings.js";
import type { ActionKind, ListFilters } from "./types.js";

const root = (): HTMLElement => {
  const element = document.getElementById("app");
  if (!element) throw new Error("missing #app container");
  return element;
};

let detailController: DetailController | null = null;
let listController: ListController | null = null;

function navChrome(active: string): string {
  const link = (href: string, label: string, key: string) =>
    `<a href="${href}" class="${active === key ? "active" : ""}">${label}</a>`;
  return `<nav>${link("#/", "Forecasts", "list")} ${link("#/settings", "Settings", "settings")}
<span class="user-chip">user: ${userName()}</span></nav>`;
}

function showListPage(filters: ListFilters): void {
  const api = new ApiClient(apiBase());
  listController = new ListController(api, (state) => {
    const banner = state.error ? renderErrorBanner(state.error) : "";
    root().innerHTML = `${navChrome("list")}
<h1>Demand forecasts</h1>
${banner}
${renderFilters(state.filters)}
${renderForecastTable(state.rows)}`;
  });
  void listController.load(filters);
}

function showDetailPage(nodeId: string): void {
  const api = new ApiClient(apiBase());
  detailController = new DetailController(api, nodeId, userName, (state) => {
    let body: string;
    if (state.notFound) {
      body = renderNotFound(nodeId);
    } else if (state.detail) {
      const banner = state.error ? renderErrorBanner(state.error) : "";
      body = banner + renderDetail(state.detail, state.controls);
    } else if (state.error) {
      body = renderErrorBanner(state.error);
    } else {
      body = `<p class="empty-state">Loading…</p>`;
    }
    root().innerHTML = `${navChrome("detail")}\n${body}`;
  });
  void detailController.load();
}

function showSettingsPage(): void {
  root().innerHTML = `${navChrome("settings")}
<h1>Settings</h1>
<form data-role="settings">
<label>User name <input name="user" value="${userName()}"></label>
<label>API base URL <input name="apiBase" value="${apiBase()}" placeholder="same origin"></label>
<button type="submit">Save</button>
</form>`;
}

function route(): void {
  detailController = null;
  listController = null;
  const hash = window.location.hash || "#/";
  const detail = hash.match(/^#\/forecast\/(.+)$/);
  if (detail) {
    showDetailPage(decodeURIComponent(detail[1]));
  } else if (hash === "#/settings") {
    showSettingsPage();
  } else {
    showListPage({});
  }
}

function commentFor(targetId: string): string {
  const box = document.querySelector<HTMLTextAreaElement>(
    `[data-comment-for="${CSS.escape(targetId)}"]`,
  );
  return box ? box.value : "";
}

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement | null;
  if (!target) return;

  const row = target.closest<HTMLElement>("tr.forecast-row");
  if (row?.dataset.nodeId) {
    window.location.hash = `#/forecast/${encodeURIComponent(row.dataset.nodeId)}`;
    return;
  }

  const button = target.closest<HTMLElement>("[data-action]");
  if (!button || !detailController) return;
  const action = button.dataset.action;
  if (action === "select-rating" && button.dataset.targetId && button.dataset.rating) {
    detailController.selectRating(button.dataset.targetId, Number(button.dataset.rating));
  } else if (action === "submit-rating" && button.dataset.targetId) {
    const id = button.dataset.targetId;
    void detailController.submitRating(id, commentFor(id));
  } else if ((action === "accept" || action === "reject") && button.dataset.optionId) {
    const kind: ActionKind = action === "accept" ? "accepted" : "rejected";
    void detailController.act(button.dataset.optionId, kind);
  }
});

document.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement | null;
  if (!form) return;
  if (form.dataset.role === "filters") {
    event.preventDefault();
    const data = new FormData(form);
    const filters: ListFilters = {};
    for (const key of ["material", "client", "from", "to"] as const) {
      const value = String(data.get(key) ?? "").trim();
      if (value) filters[key] = value;
    }
    void listController?.load(filters);
  } else if (form.dataset.role === "settings") {
    event.preventDefault();
    const data = new FormData(form);
    setUserName(String(data.get("user") ?? "").trim() || "planner");
    setApiBase(String(data.get("apiBase") ?? "").trim());
    window.location.hash = "#/";
  }
});

window.addEventListener("hashchange", route);
route();
