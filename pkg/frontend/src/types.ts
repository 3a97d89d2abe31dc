/** Mirrors of the HTTP API response shapes. The UI renders these values
 * verbatim; it never recomputes rankings, deviations, or summaries. */

export interface ForecastRow {
  forecast_id: string;
  node_id: string;
  target_date: string;
  quantity: number;
  material: string | null;
  client: string | null;
}

export interface RankedFeature {
  relevance_id: string;
  feature: string;
  weight: number;
  rank: number;
}

export interface Explanation {
  node_id: string;
  k: number;
  text: string;
  features: RankedFeature[];
}

export interface FeedbackSummary {
  count: number;
  mean_rating: number;
  histogram: number[];
}

export interface OptionCard {
  node_id: string;
  action: string;
  rank: number;
  deviation: number;
  feedback: FeedbackSummary;
}

export interface ForecastDetail extends ForecastRow {
  created_at: string;
  explanation: Explanation | null;
  options: OptionCard[];
  feedback: FeedbackSummary;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}

export interface ListFilters {
  material?: string;
  client?: string;
  from?: string;
  to?: string;
}

export type ActionKind = "accepted" | "rejected" | "modified";
