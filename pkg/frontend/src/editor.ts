import { Grid, cloneGrid, gridsEqual } from './grid.js';
import { NUM_SYMBOLS } from './palette.js';

/**
 * Paintable answer grid with undo.
 *
 * The editor starts as a copy of the served test question (most tasks
 * are completions of it) and its dimensions are locked: painting can
 * only change cell symbols, never the shape. Correctness is never
 * judged here; every verdict comes from the server.
 */
export class EditorState {
  private grid: Grid = [];
  private undoStack: Grid[] = [];
  selectedSymbol = 0;

  load(question: Grid): void {
    this.grid = cloneGrid(question);
    this.undoStack = [];
  }

  get current(): Grid {
    return cloneGrid(this.grid);
  }

  get width(): number {
    return this.grid.length ? this.grid[0].length : 0;
  }

  get height(): number {
    return this.grid.length;
  }

  get canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  selectSymbol(symbol: number): void {
    if (!Number.isInteger(symbol) || symbol < 0 || symbol >= NUM_SYMBOLS) {
      throw new Error(`symbol ${symbol} outside 0..9`);
    }
    this.selectedSymbol = symbol;
  }

  paint(col: number, row: number): void {
    if (row < 0 || row >= this.height || col < 0 || col >= this.width) {
      throw new Error(`cell (${col}, ${row}) outside ${this.width}x${this.height} grid`);
    }
    if (this.grid[row][col] === this.selectedSymbol) return;
    this.undoStack.push(cloneGrid(this.grid));
    this.grid[row][col] = this.selectedSymbol;
  }

  undo(): boolean {
    const prior = this.undoStack.pop();
    if (!prior) return false;
    this.grid = prior;
    return true;
  }

  /** true when the editor still shows exactly the loaded question */
  isPristine(question: Grid): boolean {
    return gridsEqual(this.grid, question);
  }
}
