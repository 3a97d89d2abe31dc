/** Page logic, kept free of the DOM so the feedback loop is testable:
 * state in memory, renders delegated to a callback, one documented
 * endpoint call per user interaction, refetch-on-mutate.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import type { ControlState } from "./render.js";
import type { ActionKind, ForecastDetail, ForecastRow, ListFilters } from "./types.js";

export interface ListState {
  rows: ForecastRow[];
  filters: ListFilters;
  error?: string;
}

export class ListController {
  state: ListState = { rows: [], filters: {} };

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: ListState) => void = () => {},
  ) {}

  async load(filters: ListFilters = this.state.filters): Promise<void> {
    this.state.filters = filters;
    try {
      this.state.rows = await this.api.listForecasts(filters);
      this.state.error = undefined;
    } catch (error) {
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    this.onChange(this.state);
  }
}

export interface DetailState {
  detail: ForecastDetail | null;
  notFound: boolean;
  error?: string;
  controls: Map<string, ControlState>;
}

export class DetailController {
  state: DetailState = { detail: null, notFound: false, controls: new Map() };

  constructor(
    private readonly api: ApiClient,
    private readonly nodeId: string,
    private readonly user: () => string,
    private readonly onChange: (state: DetailState) => void = () => {},
  ) {}

  async load(): Promise<void> {
    try {
      this.state.detail = await this.api.getForecast(this.nodeId);
      this.state.notFound = false;
      this.state.error = undefined;
    } catch (error) {
      if (error instanceof ApiRequestError && error.status === 404) {
        this.state.notFound = true;
      } else {
        this.state.error = error instanceof Error ? error.message : String(error);
      }
    }
    this.onChange(this.state);
  }

  control(targetId: string): ControlState {
    return this.state.controls.get(targetId) ?? { pending: false };
  }

  /** Select a rating value; submission stays a separate, explicit step. */
  selectRating(targetId: string, rating: number): void {
    const current = this.control(targetId);
    if (current.pending || current.confirmed) return;
    this.setControl(targetId, { ...current, selected: rating });
  }

  /** POST /feedback for a forecast, option, explanation, or relevance id;
   * the control locks while in flight and on success, and the page data
   * is refetched (no reload) so summaries reflect the server's state. */
  async submitRating(targetId: string, comment = ""): Promise<void> {
    const current = this.control(targetId);
    const rating = current.selected;
    if (!rating || current.pending || current.confirmed) return;
    this.setControl(targetId, { pending: true, selected: rating });
    try {
      await this.api.submitFeedback(this.user(), targetId, rating, comment);
      this.setControl(targetId, {
        pending: false,
        selected: rating,
        confirmed: `Rated ${rating}`,
      });
      await this.refetch();
    } catch (error) {
      this.setControl(targetId, {
        pending: false,
        selected: rating,
        error: inlineMessage(error),
      });
      this.onChange(this.state);
    }
  }

  /** POST /actions with kind accepted/rejected/modified for one option. */
  async act(optionId: string, kind: ActionKind): Promise<void> {
    if (this.control(optionId).pending) return;
    this.setControl(optionId, { pending: true });
    try {
      await this.api.submitAction(this.user(), optionId, kind);
      this.setControl(optionId, { pending: false, confirmed: kind });
      await this.refetch();
    } catch (error) {
      this.setControl(optionId, { pending: false, error: inlineMessage(error) });
      this.onChange(this.state);
    }
  }

  private async refetch(): Promise<void> {
    try {
      this.state.detail = await this.api.getForecast(this.nodeId);
    } catch {
      // keep showing the last good state; the confirmation note stands
    }
    this.onChange(this.state);
  }

  private setControl(targetId: string, control: ControlState): void {
    this.state.controls.set(targetId, control);
    this.onChange(this.state);
  }
}

function inlineMessage(error: unknown): string {
  if (error instanceof ApiRequestError) {
    return error.body.message;
  }
  return error instanceof Error ? error.message : String(error);
}
