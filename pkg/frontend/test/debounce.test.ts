import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Debouncer, LatestOnly } from "../src/debounce.js";

describe("Debouncer", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("runs only the last op scheduled within the window", () => {
    const debouncer = new Debouncer(300);
    const calls: number[] = [];
    debouncer.schedule(() => calls.push(1));
    vi.advanceTimersByTime(100);
    debouncer.schedule(() => calls.push(2));
    vi.advanceTimersByTime(100);
    debouncer.schedule(() => calls.push(3));
    vi.advanceTimersByTime(299);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([3]);
  });

  it("runs again for ops scheduled after the window closed", () => {
    const debouncer = new Debouncer(50);
    const calls: number[] = [];
    debouncer.schedule(() => calls.push(1));
    vi.advanceTimersByTime(50);
    debouncer.schedule(() => calls.push(2));
    vi.advanceTimersByTime(50);
    expect(calls).toEqual([1, 2]);
  });

  it("cancel drops the pending op", () => {
    const debouncer = new Debouncer(50);
    const calls: number[] = [];
    debouncer.schedule(() => calls.push(1));
    debouncer.cancel();
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([]);
  });
});

describe("LatestOnly", () => {
  it("marks superseded ids as stale", () => {
    const latest = new LatestOnly();
    const first = latest.next();
    const second = latest.next();
    expect(latest.isCurrent(first)).toBe(false);
    expect(latest.isCurrent(second)).toBe(true);
  });
});
