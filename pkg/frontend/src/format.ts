/** Score badge helpers: exact server values carried through, two decimals shown. */

export function formatScore(score: number): string {
	return score.toFixed(2);
}

/** Exact payload value for data attributes, so badges stay byte-comparable
 * with the API response. */
export function exactScore(score: number): string {
	return JSON.stringify(score);
}

const PALETTE = [
	"#f2c3a7",
	"#b5d3a6",
	"#a7c8f0",
	"#e4b4e0",
	"#f0e3a1",
	"#a6ded6",
	"#d9b8a9",
	"#c3c9f2",
];

/** Deterministic color for a lexical match group, cycling by match rank. */
export function colorForRank(rank: number): string {
	return PALETTE[((rank % PALETTE.length) + PALETTE.length) % PALETTE.length];
}

export const PALETTE_SIZE = PALETTE.length;

export function escapeHtml(text: string): string {
	return text
		.replace(/&/g, "&amp;")
		.replace(/</g, "&lt;")
		.replace(/>/g, "&gt;")
		.replace(/"/g, "&quot;");
}
