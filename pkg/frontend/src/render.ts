/**
 * Pure HTML builders for the annotated panes, summary cards, and the
 * global-view strip. Everything shown is taken verbatim from server payloads;
 * display filters only change which annotations are drawn.
 */

import { colorForRank, escapeHtml, exactScore, formatScore } from "./format.js";
import type { DisplayFilters } from "./state.js";
import type { AlignmentPayload, ExampleDetail, GlobalViewPayload, TextPayload } from "./types.js";

export interface TokenMark {
	/** Rank of the first lexical match covering this token, or null. */
	matchRank: number | null;
	/** Semantic-only match: underline the token. */
	underline: boolean;
	/** Summary-side token that is part of a novel (unsupported) n-gram. */
	novel: boolean;
	best: number | null;
}

function emptyMarks(count: number): TokenMark[] {
	return Array.from({ length: count }, () => ({ matchRank: null, underline: false, novel: false, best: null }));
}

function wantsUnderline(token: { stop: boolean; punct: boolean }, best: number | null, filters: DisplayFilters): boolean {
	if (best === null || token.punct) {
		return false;
	}
	if (token.stop && !filters.showStopwordMatches) {
		return false;
	}
	return best >= filters.minSemanticScore;
}

export function summaryTokenMarks(text: TextPayload, alignment: AlignmentPayload, filters: DisplayFilters): TokenMark[] {
	const marks = emptyMarks(text.tokens.length);
	alignment.lexical.matches.forEach((match, rank) => {
		const [start, end] = match.summary_span.tokens;
		for (let i = start; i < end && i < marks.length; i++) {
			if (marks[i].matchRank === null) {
				marks[i].matchRank = rank;
			}
		}
	});
	for (const ngram of alignment.novel.ngrams) {
		for (const span of ngram.spans) {
			const [start, end] = span.tokens;
			for (let i = start; i < end && i < marks.length; i++) {
				marks[i].novel = true;
			}
		}
	}
	alignment.semantic.rows.forEach((row, i) => {
		if (i >= marks.length) {
			return;
		}
		marks[i].best = row.best;
		if (marks[i].matchRank === null) {
			marks[i].underline = wantsUnderline(text.tokens[i], row.best, filters);
		}
	});
	return marks;
}

export function sourceTokenMarks(text: TextPayload, alignment: AlignmentPayload, filters: DisplayFilters): TokenMark[] {
	const marks = emptyMarks(text.tokens.length);
	alignment.lexical.matches.forEach((match, rank) => {
		for (const span of match.source_spans) {
			const [start, end] = span.tokens;
			for (let i = start; i < end && i < marks.length; i++) {
				if (marks[i].matchRank === null) {
					marks[i].matchRank = rank;
				}
			}
		}
	});
	alignment.semantic.source_best.forEach((best, i) => {
		if (i >= marks.length) {
			return;
		}
		marks[i].best = best;
		if (marks[i].matchRank === null) {
			marks[i].underline = wantsUnderline(text.tokens[i], best, filters);
		}
	});
	return marks;
}

/** One pane of running text with marked token spans; inter-token text is kept
 * verbatim so the original remains readable. */
export function renderPane(text: TextPayload, marks: TokenMark[], side: "source" | "summary"): string {
	const parts: string[] = [];
	let cursor = 0;
	text.tokens.forEach((token, i) => {
		if (token.start > cursor) {
			parts.push(escapeHtml(text.raw.slice(cursor, token.start)));
		}
		const mark = marks[i];
		const classes = ["tok"];
		let style = "";
		if (mark.matchRank !== null) {
			classes.push("lex");
			style = ` style="background-color:${colorForRank(mark.matchRank)}"`;
		}
		if (mark.underline) {
			classes.push("sem");
		}
		if (mark.novel) {
			classes.push("novel");
		}
		const best = mark.best === null ? "" : ` data-best="${exactScore(mark.best)}"`;
		const rank = mark.matchRank === null ? "" : ` data-match="${mark.matchRank}"`;
		parts.push(
			`<span class="${classes.join(" ")}" id="${side}-tok-${i}" data-token="${i}"${rank}${best}${style}>` +
				escapeHtml(text.raw.slice(token.start, token.end)) +
				"</span>",
		);
		cursor = token.end;
	});
	if (cursor < text.raw.length) {
		parts.push(escapeHtml(text.raw.slice(cursor)));
	}
	return parts.join("");
}

export interface CardBadge {
	quadrant: string;
	lexical: number;
	semantic: number;
}

/** Selectable cards for the generated summaries, with quadrant badges once the
 * per-summary scores are known. */
export function renderSummaryCards(
	example: ExampleDetail,
	badges: Map<number, CardBadge>,
	selectedGen: number | null,
): string {
	const cards = example.generated.map((gen, k) => {
		const badge = badges.get(k);
		const badgeHtml = badge
			? `<span class="badge quadrant-${badge.quadrant}"` +
				` data-lexical="${exactScore(badge.lexical)}" data-semantic="${exactScore(badge.semantic)}">` +
				`${escapeHtml(badge.quadrant)} ${formatScore(badge.lexical)}/${formatScore(badge.semantic)}</span>`
			: "";
		const selected = k === selectedGen ? " selected" : "";
		return (
			`<button class="summary-card${selected}" data-gen="${k}">` +
			`<span class="model">${escapeHtml(gen.model)}</span>${badgeHtml}</button>`
		);
	});
	return cards.join("");
}

/** The scrollbar-adjacent density strip: one segment per bucket, opacity
 * proportional to lexical annotation density. */
export function renderGlobalView(view: GlobalViewPayload): string {
	const segments = view.density.map((density, b) => {
		const semantic = view.semantic[b];
		const title = semantic === null ? `bucket ${b}` : `bucket ${b}: best ${formatScore(semantic)}`;
		return `<div class="gv-seg" data-bucket="${b}" style="opacity:${density}" title="${title}"></div>`;
	});
	return segments.join("");
}

/** Hover badge text plus the per-source-token highlight intensities. */
export function hoverHighlights(matches: { index: number; score: number }[]): Map<number, number> {
	const out = new Map<number, number>();
	if (matches.length === 0) {
		return out;
	}
	const top = Math.max(...matches.map((m) => m.score));
	const bottom = Math.min(...matches.map((m) => m.score));
	const spread = top - bottom;
	for (const match of matches) {
		const intensity = spread > 0 ? 0.25 + 0.75 * ((match.score - bottom) / spread) : 1.0;
		if (!out.has(match.index)) {
			out.set(match.index, intensity);
		}
	}
	return out;
}

export function renderScoreBadge(score: number | null): string {
	if (score === null) {
		return "";
	}
	return `<span class="score-badge" data-score="${exactScore(score)}">${formatScore(score)}</span>`;
}
