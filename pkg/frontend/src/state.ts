import type { FilterMode } from "./api.js";

export type ModalityTab = "fiper" | "text" | "blocks";

// What the explorer is currently showing. The hovered feature, when set,
// must name a rendered row; renderView clears it on re-render.
export interface ClientViewState {
  bundleId: string | null;
  filter: FilterMode;
  hovered: string | null;
  tab: ModalityTab;
}

export function initialState(): ClientViewState {
  return { bundleId: null, filter: "all", hovered: null, tab: "fiper" };
}

// Monotonic token: at most one in-flight fetch wins per view state; any
// response carrying a stale token is discarded instead of rendered.
export class RequestToken {
  private current = 0;

  next(): number {
    this.current += 1;
    return this.current;
  }

  isCurrent(token: number): boolean {
    return token === this.current;
  }
}
