/**
 * Wire types mirroring the annotation server's JSON payloads.
 * The client renders these values as-is and never recomputes scores.
 */

export type PairTypeName = "doc_generated" | "doc_reference" | "reference_generated";

export interface TokenPayload {
	start: number;
	end: number;
	norm: string;
	stop: boolean;
	punct: boolean;
}

export interface TextPayload {
	raw: string;
	tokens: TokenPayload[];
}

export interface PairRef {
	pair: PairTypeName;
	gen: number | null;
}

export interface CorpusMeta {
	examples: number;
	fingerprint: string;
	config: Record<string, unknown>;
	models: string[];
}

export interface ExampleDetail {
	index: number;
	id: string;
	document: TextPayload;
	reference: TextPayload;
	generated: { model: string; text: TextPayload }[];
	pairs: PairRef[];
}

export interface SpanPayload {
	tokens: [number, number];
	chars: [number, number];
}

export interface LexMatchPayload {
	summary_span: SpanPayload;
	source_spans: SpanPayload[];
	length: number;
}

export interface MatchPayload {
	index: number;
	chars: [number, number];
	score: number;
}

export interface SemanticRowPayload {
	best: number | null;
	matches: MatchPayload[];
}

export interface RougePayload {
	precision: number;
	recall: number;
	f1: number;
	n: number;
}

export interface AlignmentPayload {
	pair: PairTypeName;
	gen: number | null;
	lexical: { coverage: number; matches: LexMatchPayload[] };
	semantic: {
		rows: SemanticRowPayload[];
		source_best: (number | null)[];
		bertscore: { precision: number; recall: number; f1: number };
	};
	rouge1: RougePayload | null;
	rouge2: RougePayload | null;
	quadrant: string;
	scores: { lexical: number; semantic: number };
	novel: { n: number; content_only: boolean; ngrams: { tokens: string[]; spans: SpanPayload[] }[] };
}

export interface HoverPayload {
	token: number;
	best_score: number | null;
	matches: MatchPayload[];
}

export interface GlobalViewPayload {
	pair: PairTypeName;
	gen: number | null;
	buckets: number;
	density: number[];
	semantic: (number | null)[];
}
