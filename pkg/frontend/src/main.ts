/** Browser wiring: fetch orchestration, event handling, and DOM updates.
 * All score math lives on the server; this file only displays payloads. */

import { ApiClient, HoverCache, type PairQuery } from "./api.js";
import { formatScore } from "./format.js";
import {
	type CardBadge,
	hoverHighlights,
	renderGlobalView,
	renderPane,
	renderScoreBadge,
	renderSummaryCards,
	sourceTokenMarks,
	summaryTokenMarks,
} from "./render.js";
import { decideScroll, firstSourceSpan } from "./scroll.js";
import { initialState, selectExample, selectPair, setFilters, stepExample, type ViewState } from "./state.js";
import type { AlignmentPayload, ExampleDetail, PairTypeName } from "./types.js";

const GLOBALVIEW_BUCKETS = 120;

function apiBase(): string {
	const params = new URLSearchParams(window.location.search);
	return params.get("api") ?? "";
}

function el<T extends HTMLElement>(id: string): T {
	const node = document.getElementById(id);
	if (!node) {
		throw new Error(`missing element #${id}`);
	}
	return node as T;
}

class App {
	private client = new ApiClient(apiBase());
	private hoverCache = new HoverCache(this.client);
	private state: ViewState = initialState();
	private example: ExampleDetail | null = null;
	private alignment: AlignmentPayload | null = null;
	private cardBadges = new Map<number, CardBadge>();
	private totalExamples = 0;
	private navigation: AbortController | null = null;

	async boot(): Promise<void> {
		try {
			const meta = await this.client.corpus();
			this.totalExamples = meta.examples;
			el("corpus-info").textContent = `${meta.examples} examples, fingerprint ${meta.fingerprint.slice(0, 12)}`;
			if (meta.examples > 0) {
				await this.loadExample(0);
			}
		} catch (err) {
			this.showError(`could not reach server: ${String(err)}`);
		}
		this.wireControls();
	}

	private wireControls(): void {
		el("prev").addEventListener("click", () => void this.loadExample(stepExample(this.state, this.totalExamples, -1)));
		el("next").addEventListener("click", () => void this.loadExample(stepExample(this.state, this.totalExamples, 1)));
		document.addEventListener("keydown", (event) => {
			if (event.key === "ArrowLeft") {
				void this.loadExample(stepExample(this.state, this.totalExamples, -1));
			} else if (event.key === "ArrowRight") {
				void this.loadExample(stepExample(this.state, this.totalExamples, 1));
			}
		});
		for (const kind of ["doc_generated", "doc_reference", "reference_generated"] as PairTypeName[]) {
			el(`pair-${kind}`).addEventListener("click", () => void this.switchPair(kind));
		}
		const threshold = el<HTMLInputElement>("min-score");
		threshold.addEventListener("input", () => {
			this.state = setFilters(this.state, { minSemanticScore: Number(threshold.value) });
			el("min-score-value").textContent = formatScore(Number(threshold.value));
			this.renderPanes();
		});
		const stopToggle = el<HTMLInputElement>("show-stopwords");
		stopToggle.addEventListener("change", () => {
			this.state = setFilters(this.state, { showStopwordMatches: stopToggle.checked });
			this.renderPanes();
		});
	}

	private showError(message: string): void {
		const banner = el("error-banner");
		banner.textContent = message;
		banner.classList.remove("hidden");
	}

	private clearError(): void {
		el("error-banner").classList.add("hidden");
	}

	private async loadExample(index: number): Promise<void> {
		this.navigation?.abort();
		const controller = new AbortController();
		this.navigation = controller;
		try {
			const example = await this.client.example(index, controller.signal);
			this.example = example;
			this.state = selectExample({ ...this.state, exampleIndex: index }, example);
			this.hoverCache.clear();
			this.cardBadges = new Map();
			el("example-id").textContent = `${example.id} (${index + 1}/${this.totalExamples})`;
			await this.loadPair(controller);
			void this.loadCardBadges(example, controller);
			this.clearError();
		} catch (err) {
			if (!controller.signal.aborted) {
				this.showError(`failed to load example ${index}: ${String(err)}`);
			}
		}
	}

	private async switchPair(kind: PairTypeName): Promise<void> {
		if (!this.example) {
			return;
		}
		const candidate = this.example.pairs.find((p) => p.pair === kind);
		if (!candidate) {
			return;
		}
		this.state = selectPair(this.state, this.example, candidate.pair, candidate.gen);
		const controller = new AbortController();
		this.navigation?.abort();
		this.navigation = controller;
		try {
			await this.loadPair(controller);
			this.clearError();
		} catch (err) {
			if (!controller.signal.aborted) {
				this.showError(`failed to load pair: ${String(err)}`);
			}
		}
	}

	private async selectGenerated(gen: number): Promise<void> {
		if (!this.example) {
			return;
		}
		const kind = this.state.pair.pair === "reference_generated" ? "reference_generated" : "doc_generated";
		this.state = selectPair(this.state, this.example, kind, gen);
		const controller = new AbortController();
		this.navigation?.abort();
		this.navigation = controller;
		await this.loadPair(controller);
	}

	private pairQuery(): PairQuery {
		return { pair: this.state.pair.pair, gen: this.state.pair.gen };
	}

	private async loadPair(controller: AbortController): Promise<void> {
		if (!this.example) {
			return;
		}
		const pair = this.pairQuery();
		const [alignment, globalView] = await Promise.all([
			this.client.alignment(this.state.exampleIndex, pair, controller.signal),
			this.client.globalView(this.state.exampleIndex, pair, GLOBALVIEW_BUCKETS, controller.signal),
		]);
		this.alignment = alignment;
		el("globalview").innerHTML = renderGlobalView(globalView);
		el("pair-label").textContent = `${alignment.pair}${alignment.gen === null ? "" : ` #${alignment.gen}`}`;
		el("quadrant").innerHTML =
			`<span class="badge quadrant-${alignment.quadrant}">${alignment.quadrant}</span>` +
			` lexical ${formatScore(alignment.scores.lexical)}, semantic ${formatScore(alignment.scores.semantic)}`;
		this.renderPanes();
		this.renderCards();
	}

	private async loadCardBadges(example: ExampleDetail, controller: AbortController): Promise<void> {
		for (const pair of example.pairs) {
			if (pair.pair !== "doc_generated" || pair.gen === null) {
				continue;
			}
			try {
				const alignment = await this.client.alignment(example.index, pair, controller.signal);
				this.cardBadges.set(pair.gen, {
					quadrant: alignment.quadrant,
					lexical: alignment.scores.lexical,
					semantic: alignment.scores.semantic,
				});
				this.renderCards();
			} catch {
				return; // aborted navigation; badges for the next example will refetch
			}
		}
	}

	private sourceText() {
		if (!this.example) {
			throw new Error("no example loaded");
		}
		return this.state.pair.pair === "reference_generated" ? this.example.reference : this.example.document;
	}

	private summaryText() {
		if (!this.example) {
			throw new Error("no example loaded");
		}
		if (this.state.pair.pair === "doc_reference") {
			return this.example.reference;
		}
		return this.example.generated[this.state.pair.gen ?? 0].text;
	}

	private renderPanes(): void {
		if (!this.example || !this.alignment) {
			return;
		}
		const source = this.sourceText();
		const summary = this.summaryText();
		const sourcePane = el("source-pane");
		const summaryPane = el("summary-pane");
		sourcePane.innerHTML = renderPane(source, sourceTokenMarks(source, this.alignment, this.state.filters), "source");
		summaryPane.innerHTML = renderPane(
			summary,
			summaryTokenMarks(summary, this.alignment, this.state.filters),
			"summary",
		);
		summaryPane.querySelectorAll<HTMLElement>(".tok").forEach((node) => {
			node.addEventListener("mouseenter", () => void this.onHover(node));
			node.addEventListener("mouseleave", () => this.clearHover());
			node.addEventListener("click", () => this.onClickToken(node));
		});
	}

	private renderCards(): void {
		if (!this.example) {
			return;
		}
		const cards = el("summary-cards");
		cards.innerHTML = renderSummaryCards(this.example, this.cardBadges, this.state.pair.gen);
		cards.querySelectorAll<HTMLElement>(".summary-card").forEach((node) => {
			node.addEventListener("click", () => void this.selectGenerated(Number(node.dataset.gen)));
		});
	}

	private async onHover(node: HTMLElement): Promise<void> {
		const token = Number(node.dataset.token);
		try {
			const payload = await this.hoverCache.get(this.state.exampleIndex, this.pairQuery(), token);
			if (payload.best_score === null) {
				return; // masked token: no-op
			}
			el("hover-badge").innerHTML = renderScoreBadge(payload.best_score);
			const intensities = hoverHighlights(payload.matches);
			for (const [index, intensity] of intensities) {
				const target = document.getElementById(`source-tok-${index}`);
				if (target) {
					target.classList.add("hover-match");
					target.style.setProperty("--intensity", String(intensity));
				}
			}
		} catch {
			// hover is best-effort; keep the panes as they are
		}
	}

	private clearHover(): void {
		el("hover-badge").innerHTML = "";
		document.querySelectorAll<HTMLElement>(".hover-match").forEach((node) => {
			node.classList.remove("hover-match");
			node.style.removeProperty("--intensity");
		});
	}

	private onClickToken(node: HTMLElement): void {
		if (!this.alignment || node.dataset.match === undefined) {
			return;
		}
		const match = this.alignment.lexical.matches[Number(node.dataset.match)];
		if (!match || match.source_spans.length === 0) {
			return;
		}
		const span = firstSourceSpan(match);
		const target = document.getElementById(`source-tok-${span.tokens[0]}`);
		const pane = el("source-pane");
		if (!target) {
			return;
		}
		const decision = decideScroll(target.offsetTop, target.offsetHeight, pane.scrollTop, pane.clientHeight);
		if (decision.scroll) {
			pane.scrollTo({ top: decision.top, behavior: "smooth" });
		}
		for (let i = span.tokens[0]; i < span.tokens[1]; i++) {
			const tok = document.getElementById(`source-tok-${i}`);
			if (tok) {
				tok.classList.remove("pulse");
				void tok.offsetWidth; // restart the animation
				tok.classList.add("pulse");
			}
		}
	}
}

new App().boot().catch((err) => console.error(err));
