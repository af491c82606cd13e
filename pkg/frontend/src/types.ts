// Mirrors of the service's JSON wire shapes. The workbench renders these
// facts verbatim; it never recomputes verdicts client-side.

export interface SpanJson {
  start: number;
  end: number;
  line: number;
  col: number;
  end_line: number;
  end_col: number;
}

export interface DiagnosticJson {
  severity: "error" | "warning";
  message: string;
  code: string;
  span: SpanJson;
}

export interface MeasureSymbol {
  name: string;
  type: "boolean" | "numeric" | "scale";
  labels?: string[];
}

export interface SymbolsJson {
  events: string[];
  measures: MeasureSymbol[];
  constants: { name: string; value: number }[];
}

export interface ParseResponse {
  diagnostics: DiagnosticJson[];
  symbols: SymbolsJson;
}

export interface CompletionItemJson {
  label: string;
  kind: string;
  insert_text: string;
}

export interface TraceRowJson {
  t: number;
  events: string[];
  measures: Record<string, boolean | number | string>;
}

export interface TraceJson {
  horizon: number;
  points: TraceRowJson[];
}

export interface HighlightJson {
  rule: string;
  start: number;
  end: number;
}

export interface RenderedDiagnosisJson {
  type: "conflict" | "insufficiency";
  mode: "raw" | "filtered";
  rules: string[];
  trace: TraceRowJson[];
  highlights?: HighlightJson[];
  related_rules?: { rule: string; events: string[] }[];
  counts: { shown: number; total: number };
}

export interface VerdictJson {
  property: string;
  target: string;
  status: "IssueFound" | "NoIssueWithinBounds";
  bounds: { max_points: number; horizon: number; node_budget: number };
  witness?: TraceJson;
  situation?: TraceJson;
  conflict_set?: string[];
  budget_exhausted?: boolean;
  diagnosis?: {
    raw: RenderedDiagnosisJson;
    filtered: RenderedDiagnosisJson;
    text: string;
  };
}

export interface CheckResponse {
  diagnostics: DiagnosticJson[];
  verdicts: VerdictJson[];
  timing: { total_ms: number; checks: { property: string; target: string; ms: number }[] };
}

export interface CheckRequest {
  text: string;
  property: string;
  target: string;
  mode?: "raw" | "filtered";
  max_points?: number;
  horizon?: number;
  budget?: number;
}
