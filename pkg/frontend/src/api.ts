/** Typed client for the annotation server; the base URL is configurable. */

import type {
	AlignmentPayload,
	CorpusMeta,
	ExampleDetail,
	GlobalViewPayload,
	HoverPayload,
	PairTypeName,
} from "./types.js";

export interface PairQuery {
	pair: PairTypeName;
	gen: number | null;
}

export function buildUrl(base: string, path: string, params: Record<string, string | number | null | undefined>): string {
	const query = Object.entries(params)
		.filter(([, value]) => value !== null && value !== undefined)
		.map(([key, value]) => `${encodeURIComponent(key)}=${encodeURIComponent(String(value))}`)
		.join("&");
	const root = base.replace(/\/$/, "");
	return query ? `${root}${path}?${query}` : `${root}${path}`;
}

export class ApiClient {
	constructor(
		private readonly base: string = "",
		private readonly fetchFn: typeof fetch = fetch,
	) {}

	private async get<T>(path: string, params: Record<string, string | number | null | undefined> = {}, signal?: AbortSignal): Promise<T> {
		const response = await this.fetchFn(buildUrl(this.base, path, params), { signal });
		if (!response.ok) {
			throw new Error(`${path}: HTTP ${response.status}`);
		}
		return (await response.json()) as T;
	}

	corpus(signal?: AbortSignal): Promise<CorpusMeta> {
		return this.get("/corpus", {}, signal);
	}

	example(index: number, signal?: AbortSignal): Promise<ExampleDetail> {
		return this.get(`/example/${index}`, {}, signal);
	}

	alignment(index: number, pair: PairQuery, signal?: AbortSignal): Promise<AlignmentPayload> {
		return this.get(`/example/${index}/alignment`, { pair: pair.pair, gen: pair.gen }, signal);
	}

	hover(index: number, pair: PairQuery, token: number, k = 10, signal?: AbortSignal): Promise<HoverPayload> {
		return this.get(`/example/${index}/hover`, { pair: pair.pair, gen: pair.gen, token, k }, signal);
	}

	globalView(index: number, pair: PairQuery, buckets: number, signal?: AbortSignal): Promise<GlobalViewPayload> {
		return this.get(`/example/${index}/globalview`, { pair: pair.pair, gen: pair.gen, buckets }, signal);
	}
}

/** Lazily fetched hover payloads, memoized per (pair, gen, token). */
export class HoverCache {
	private cache = new Map<string, Promise<HoverPayload>>();

	constructor(
		private readonly client: ApiClient,
		private readonly k = 10,
	) {}

	get(index: number, pair: PairQuery, token: number): Promise<HoverPayload> {
		const key = `${index}|${pair.pair}|${pair.gen}|${token}|${this.k}`;
		let pending = this.cache.get(key);
		if (!pending) {
			pending = this.client.hover(index, pair, token, this.k);
			pending.catch(() => this.cache.delete(key));
			this.cache.set(key, pending);
		}
		return pending;
	}

	clear(): void {
		this.cache.clear();
	}

	get size(): number {
		return this.cache.size;
	}
}
