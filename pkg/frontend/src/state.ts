/** View state and its pure transitions; rendering filters never touch data. */

import type { ExampleDetail, PairRef, PairTypeName } from "./types.js";

export interface DisplayFilters {
	/** Source tokens are underlined when their best semantic score reaches this. */
	minSemanticScore: number;
	showStopwordMatches: boolean;
}

export interface ViewState {
	exampleIndex: number;
	pair: PairRef;
	hoveredToken: number | null;
	filters: DisplayFilters;
}

export const DEFAULT_FILTERS: DisplayFilters = {
	minSemanticScore: 0.0,
	showStopwordMatches: false,
};

function sameKind(a: PairRef, b: PairRef): boolean {
	return a.pair === b.pair;
}

/** The pair to select when arriving at an example: keep the previous pair type
 * when the example supports it, otherwise fall back to the first available. */
export function reconcilePair(previous: PairRef | null, example: ExampleDetail): PairRef {
	if (example.pairs.length === 0) {
		return { pair: "doc_reference", gen: null };
	}
	if (previous) {
		const exact = example.pairs.find((p) => p.pair === previous.pair && p.gen === previous.gen);
		if (exact) {
			return exact;
		}
		const kind = example.pairs.find((p) => sameKind(p, previous));
		if (kind) {
			return kind;
		}
	}
	return example.pairs[0];
}

export function selectExample(state: ViewState, example: ExampleDetail): ViewState {
	return {
		...state,
		exampleIndex: example.index,
		pair: reconcilePair(state.pair, example),
		hoveredToken: null,
	};
}

export function selectPair(state: ViewState, example: ExampleDetail, pair: PairTypeName, gen: number | null): ViewState {
	const found = example.pairs.find((p) => p.pair === pair && p.gen === gen);
	if (!found) {
		return state;
	}
	return { ...state, pair: found, hoveredToken: null };
}

export function setFilters(state: ViewState, filters: Partial<DisplayFilters>): ViewState {
	return { ...state, filters: { ...state.filters, ...filters } };
}

export function stepExample(state: ViewState, total: number, delta: 1 | -1): number {
	const next = state.exampleIndex + delta;
	return Math.min(Math.max(next, 0), total - 1);
}

export function initialState(): ViewState {
	return {
		exampleIndex: 0,
		pair: { pair: "doc_reference", gen: null },
		hoveredToken: null,
		filters: { ...DEFAULT_FILTERS },
	};
}
