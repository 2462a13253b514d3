// Bounded trace storage: ring buffers keep long sessions at fixed memory.

export interface TracePoint {
  t: number;
  x: number;
  y: number;
}

export class TraceBuffer {
  private readonly capacity: number;
  private points: TracePoint[] = [];
  private start = 0;

  /** capacity default: one minute at 60 Hz */
  constructor(capacity = 3600) {
    if (capacity < 1) throw new Error("capacity must be >= 1");
    this.capacity = capacity;
  }

  get length(): number {
    return this.points.length - this.start;
  }

  last(): TracePoint | undefined {
    return this.length ? this.points[this.points.length - 1] : undefined;
  }

  push(p: TracePoint): void {
    const tail = this.last();
    if (tail && p.t < tail.t) return; // enforce monotone timestamps
    this.points.push(p);
    if (this.length > this.capacity) {
      this.start += 1;
      if (this.start > this.capacity) {
        // compact occasionally so the backing array stays bounded
        this.points = this.points.slice(this.start);
        this.start = 0;
      }
    }
  }

  toArray(): TracePoint[] {
    return this.points.slice(this.start);
  }

  clear(): void {
    this.points = [];
    this.start = 0;
  }
}
