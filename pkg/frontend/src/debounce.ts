/** Trailing-edge debouncer: only the last op scheduled within the window runs. */
export class Debouncer {
  private handle: ReturnType<typeof setTimeout> | undefined;

  constructor(private readonly delayMs: number) {}

  schedule(op: () => void): void {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = setTimeout(() => {
      this.handle = undefined;
      op();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.handle !== undefined) {
      clearTimeout(this.handle);
      this.handle = undefined;
    }
  }
}

/** Monotonic request ids so stale in-flight responses can be discarded. */
export class LatestOnly {
  private issued = 0;

  next(): number {
    return ++this.issued;
  }

  isCurrent(id: number): boolean {
    return id === this.issued;
  }
}
