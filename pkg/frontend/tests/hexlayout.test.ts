import { describe, expect, it } from "vitest";

import { SQRT3, boardPixelSize, cellsInRect, hexCenter, pixelToHex } from "../src/hexlayout.js";

describe("hex layout", () => {
  it("shifts odd rows half a hex east", () => {
    const size = 20;
    const even = hexCenter(2, 0, size);
    const odd = hexCenter(2, 1, size);
    expect(odd.x - even.x).toBeCloseTo(size * SQRT3 * 0.5, 9);
    expect(odd.y - even.y).toBeCloseTo(size * 1.5, 9);
  });

  it("pixelToHex inverts hexCenter for every cell", () => {
    const size = 17;
    for (let row = 0; row < 10; row++) {
      for (let col = 0; col < 10; col++) {
        const c = hexCenter(col, row, size);
        expect(pixelToHex(c.x, c.y, size, 10, 10)).toEqual({ col, row });
      }
    }
  });

  it("returns null far outside the board", () => {
    const size = 20;
    const { w, h } = boardPixelSize(5, 5, size);
    expect(pixelToHex(w + 100, h + 100, size, 5, 5)).toBeNull();
    expect(pixelToHex(-100, -100, size, 5, 5)).toBeNull();
  });

  it("a 5x5 area rect covers exactly 25 cells", () => {
    const cells = cellsInRect([3, 2, 5, 5]);
    expect(cells).toHaveLength(25);
    expect(cells[0]).toEqual({ col: 3, row: 2 });
    expect(cells[24]).toEqual({ col: 7, row: 6 });
  });
});
