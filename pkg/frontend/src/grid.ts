export type Grid = number[][];

export function cloneGrid(g: Grid): Grid {
  return g.map((row) => row.slice());
}

export function gridsEqual(a: Grid, b: Grid): boolean {
  if (a.length !== b.length) return false;
  for (let r = 0; r < a.length; r++) {
    if (a[r].length !== b[r].length) return false;
    for (let c = 0; c < a[r].length; c++) {
      if (a[r][c] !== b[r][c]) return false;
    }
  }
  return true;
}

export function dims(g: Grid): { width: number; height: number } {
  return { width: g.length ? g[0].length : 0, height: g.length };
}
