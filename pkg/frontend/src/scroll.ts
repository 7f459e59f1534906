/** Autoscroll decisions for click-to-navigate: center the target span unless
 * it is already fully visible, in which case only pulse it. */

import type { LexMatchPayload, SpanPayload } from "./types.js";

export interface ScrollDecision {
	scroll: boolean;
	top: number;
}

export function decideScroll(
	spanTop: number,
	spanHeight: number,
	viewTop: number,
	viewHeight: number,
): ScrollDecision {
	const fullyVisible = spanTop >= viewTop && spanTop + spanHeight <= viewTop + viewHeight;
	if (fullyVisible) {
		return { scroll: false, top: viewTop };
	}
	return { scroll: true, top: Math.max(0, spanTop - (viewHeight - spanHeight) / 2) };
}

/** The autoscroll target: the source occurrence with the lowest start offset. */
export function firstSourceSpan(match: LexMatchPayload): SpanPayload {
	let first = match.source_spans[0];
	for (const span of match.source_spans) {
		if (span.chars[0] < first.chars[0]) {
			first = span;
		}
	}
	return first;
}
