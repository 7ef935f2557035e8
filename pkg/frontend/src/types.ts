/** Wire types of the design service. */

export interface InitialBars {
  s: number;
  t: number;
  u: number;
  v: number;
}

export interface ProfileEntryDoc {
  phi: number;
  s?: number;
  t?: number;
  d?: number;
  z?: number;
}

export interface ChainLinkDoc {
  u0?: number;
  v0?: number;
}

export interface NetSpecDocument {
  a_ref: number;
  branch?: string | string[];
  cases: string[];
  initial: InitialBars;
  chain?: ChainLinkDoc[];
  profile: ProfileEntryDoc[];
  boundary?: { lambda_top?: number; lambda_bottom?: number };
  parallel?: { row_scales: number[]; col_scales: number[] };
}

export interface CheckDoc {
  pass: boolean;
}

export interface ReportDocument {
  planarity: CheckDoc & { max_defect: number };
  isometry: CheckDoc & { max_deviation: number };
  collinearity: CheckDoc & { max_defect: number };
  pass: boolean;
  offenders: Record<string, unknown>;
}

export interface GeometryDocument {
  a: number;
  rows: number[][][];
  tips: number[][];
  report?: ReportDocument;
  boundary?: boolean;
}

export interface CreateResponse {
  id: string;
  classification: string;
  branch: string | null;
  case3_compatible: boolean;
  range: [number, number];
  usable_range: [number, number];
  geometry: GeometryDocument;
}

export interface ParallelResponse {
  id: string;
  master: string;
  range: [number, number];
  usable_range: [number, number];
  geometry: GeometryDocument;
}

export interface ErrorResponse {
  detail: string;
  residuals?: Record<string, unknown>;
  nearest?: number;
  usable_range?: [number, number];
}

/** Client-side mirror of the spec document plus interactive state. */
export interface DesignDocument {
  spec: NetSpecDocument;
  sliderValue: number;
  selectedCase: string;
  rowScales: number[] | null;
  colScales: number[] | null;
}
