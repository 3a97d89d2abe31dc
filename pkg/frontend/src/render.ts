/** Pure HTML renderers: view state in, markup string out.
 *
 * Every number shown comes straight from the API payload via String();
 * the only computed presentation value is bar geometry (width as a
 * percentage of the largest |weight|).
 */

import type {
  FeedbackSummary,
  ForecastDetail,
  ForecastRow,
  OptionCard,
  RankedFeature,
} from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

const num = (value: number): string => String(value);

export function renderErrorBanner(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderNotFound(nodeId: string): string {
  return `<section class="not-found"><h2>Forecast not found</h2>
<p>No forecast with id <code>${escapeHtml(nodeId)}</code>.</p>
<p><a href="#/">Back to the list</a></p></section>`;
}

// -- list page ---------------------------------------------------------

export function renderFilters(filters: {
  material?: string;
  client?: string;
  from?: string;
  to?: string;
}): string {
  return `<form class="filters" data-role="filters">
<label>Material <input name="material" value="${escapeHtml(filters.material ?? "")}"></label>
<label>Client <input name="client" value="${escapeHtml(filters.client ?? "")}"></label>
<label>From <input name="from" type="date" value="${escapeHtml(filters.from ?? "")}"></label>
<label>To <input name="to" type="date" value="${escapeHtml(filters.to ?? "")}"></label>
<button type="submit">Apply</button>
</form>`;
}

export function renderForecastTable(rows: ForecastRow[]): string {
  if (rows.length === 0) {
    return `<p class="empty-state">No forecasts match the current filters.</p>`;
  }
  const body = rows
    .map(
      (row) => `<tr class="forecast-row" data-node-id="${escapeHtml(row.node_id)}">
<td>${escapeHtml(row.forecast_id)}</td>
<td>${escapeHtml(row.material ?? "")}</td>
<td>${escapeHtml(row.client ?? "")}</td>
<td>${escapeHtml(row.target_date)}</td>
<td class="qty">${num(row.quantity)}</td>
</tr>`,
    )
    .join("\n");
  return `<table class="forecasts">
<thead><tr><th>Forecast</th><th>Material</th><th>Client</th><th>Target date</th><th>Quantity</th></tr></thead>
<tbody>
${body}
</tbody>
</table>`;
}

// -- detail page ------------------------------------------------------

/** Signed horizontal bars, one per feature, in payload (rank) order.
 * Bar width is |weight| relative to the largest |weight|; the sign picks
 * the side and the color class. */
export function renderFeatureBars(features: RankedFeature[]): string {
  if (features.length === 0) {
    return `<p class="empty-state">No ranked features.</p>`;
  }
  const maxAbs = Math.max(...features.map((f) => Math.abs(f.weight)), 0);
  const rows = features
    .map((feature) => {
      const positive = feature.weight >= 0;
      const width = maxAbs === 0 ? 0 : (Math.abs(feature.weight) / maxAbs) * 100;
      const side = positive ? "bar-pos" : "bar-neg";
      return `<div class="feature-bar" data-rank="${num(feature.rank)}" data-feature="${escapeHtml(feature.feature)}">
<span class="feature-name">${escapeHtml(feature.feature)}</span>
<span class="bar-track"><span class="bar ${side}" style="width:${width}%"></span></span>
<span class="feature-weight">${num(feature.weight)}</span>
</div>`;
    })
    .join("\n");
  return `<div class="feature-bars">\n${rows}\n</div>`;
}

export function renderSummary(summary: FeedbackSummary): string {
  return `<span class="feedback-summary">${num(summary.count)} rating${
    summary.count === 1 ? "" : "s"
  }, mean ${num(summary.mean_rating)}</span>`;
}

export interface ControlState {
  pending: boolean;
  selected?: number;
  confirmed?: string;
  error?: string;
}

/** Five selectable stars plus an explicit submit button; the submit stays
 * disabled until a rating is selected, while a request is in flight, and
 * after a confirmed submission. */
export function renderRatingControl(
  targetId: string,
  state: ControlState,
  withComment: boolean,
): string {
  const locked = state.pending || state.confirmed ? "disabled" : "";
  const target = escapeHtml(targetId);
  const buttons = [1, 2, 3, 4, 5]
    .map(
      (rating) =>
        `<button type="button" class="rate${state.selected === rating ? " selected" : ""}" ` +
        `data-action="select-rating" data-target-id="${target}" data-rating="${rating}" ${locked}>${rating}</button>`,
    )
    .join("");
  const comment = withComment
    ? `<textarea class="comment" data-comment-for="${target}" placeholder="Optional comment" ${locked}></textarea>`
    : "";
  const submitDisabled = !state.selected || state.pending || state.confirmed;
  const note = state.confirmed
    ? `<span class="confirmed">${escapeHtml(state.confirmed)}</span>`
    : state.error
      ? `<span class="inline-error">${escapeHtml(state.error)}</span>`
      : "";
  return `<div class="rating-control" data-target="${target}">${buttons}
<button type="button" class="submit-rating" data-action="submit-rating" data-target-id="${target}" ${
    submitDisabled ? "disabled" : ""
  }>Submit</button>${comment}${note}</div>`;
}

export function renderOptionCard(option: OptionCard, state: ControlState): string {
  const disabled = state.pending || state.confirmed ? "disabled" : "";
  const note = state.confirmed
    ? `<span class="confirmed">${escapeHtml(state.confirmed)}</span>`
    : state.error
      ? `<span class="inline-error">${escapeHtml(state.error)}</span>`
      : "";
  return `<div class="option-card" data-option-id="${escapeHtml(option.node_id)}">
<h4>#${num(option.rank)} ${escapeHtml(option.action)}</h4>
<p>Deviation: <span class="deviation">${num(option.deviation)}</span></p>
<p>${renderSummary(option.feedback)}</p>
<div class="option-actions">
<button type="button" data-action="accept" data-option-id="${escapeHtml(option.node_id)}" ${disabled}>Accept</button>
<button type="button" data-action="reject" data-option-id="${escapeHtml(option.node_id)}" ${disabled}>Reject</button>
${note}
</div>
${renderRatingControl(option.node_id, state, false)}
</div>`;
}

export function renderDetail(
  detail: ForecastDetail,
  controlStates: Map<string, ControlState>,
): string {
  const stateOf = (id: string): ControlState =>
    controlStates.get(id) ?? { pending: false };
  const explanation = detail.explanation
    ? `<section class="explanation">
<h3>Explanation</h3>
<p class="explanation-text">${escapeHtml(detail.explanation.text)}</p>
${renderFeatureBars(detail.explanation.features)}
</section>`
    : `<p class="empty-state">No explanation yet.</p>`;
  const options = detail.options.length
    ? detail.options.map((o) => renderOptionCard(o, stateOf(o.node_id))).join("\n")
    : `<p class="empty-state">No decision options yet.</p>`;
  return `<section class="detail" data-node-id="${escapeHtml(detail.node_id)}">
<h2>Forecast ${escapeHtml(detail.forecast_id)} <small>(${escapeHtml(detail.node_id)})</small></h2>
<dl class="props">
<dt>Material</dt><dd>${escapeHtml(detail.material ?? "")}</dd>
<dt>Client</dt><dd>${escapeHtml(detail.client ?? "")}</dd>
<dt>Target date</dt><dd>${escapeHtml(detail.target_date)}</dd>
<dt>Created</dt><dd>${escapeHtml(detail.created_at)}</dd>
<dt>Quantity</dt><dd class="qty">${num(detail.quantity)}</dd>
</dl>
${explanation}
<section class="options"><h3>Decision options</h3>
${options}
</section>
<section class="forecast-feedback"><h3>Your rating ${renderSummary(detail.feedback)}</h3>
${renderRatingControl(detail.node_id, stateOf(detail.node_id), true)}
</section>
</section>`;
}
