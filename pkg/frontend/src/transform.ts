// Pixel <-> sheet-meter mapping.  Sheet coordinates have y up; canvas
// pixels have y down.  The transform always keeps the whole sheet visible
// with a margin.

export interface SheetRect {
  width: number;   // [m]
  height: number;  // [m]
  centerX: number; // [m]
  centerY: number; // [m]
}

export class ViewTransform {
  readonly metersPerPixel: number;
  readonly originPxX: number; // pixel position of sheet center
  readonly originPxY: number;

  constructor(canvasWidth: number, canvasHeight: number, sheet: SheetRect,
              marginPx = 24) {
    const availW = canvasWidth - 2 * marginPx;
    const availH = canvasHeight - 2 * marginPx;
    if (availW <= 0 || availH <= 0) {
      throw new Error("canvas too small for the sheet view");
    }
    this.metersPerPixel = Math.max(sheet.width / availW, sheet.height / availH);
    this.originPxX = canvasWidth / 2;
    this.originPxY = canvasHeight / 2;
    this.sheet = sheet;
  }

  readonly sheet: SheetRect;

  toPx(xM: number, yM: number): [number, number] {
    return [
      this.originPxX + (xM - this.sheet.centerX) / this.metersPerPixel,
      this.originPxY - (yM - this.sheet.centerY) / this.metersPerPixel,
    ];
  }

  toMeters(xPx: number, yPx: number): [number, number] {
    return [
      this.sheet.centerX + (xPx - this.originPxX) * this.metersPerPixel,
      this.sheet.centerY - (yPx - this.originPxY) * this.metersPerPixel,
    ];
  }

  sheetFullyVisible(canvasWidth: number, canvasHeight: number): boolean {
    const corners: [number, number][] = [
      [this.sheet.centerX - this.sheet.width / 2, this.sheet.centerY - this.sheet.height / 2],
      [this.sheet.centerX + this.sheet.width / 2, this.sheet.centerY + this.sheet.height / 2],
    ];
    return corners.every(([x, y]) => {
      const [px, py] = this.toPx(x, y);
      return px >= 0 && px <= canvasWidth && py >= 0 && py <= canvasHeight;
    });
  }
}

// Legal sheet, portrait, centered at the workspace module's mid-sheet spot.
export const DEFAULT_SHEET: SheetRect = {
  width: 0.2159,
  height: 0.3556,
  centerX: 0.0,
  centerY: 0.28,
};
