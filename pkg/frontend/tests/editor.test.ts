import { describe, expect, it } from 'vitest';

import { EditorState } from '../src/editor.js';
import { gridsEqual } from '../src/grid.js';
import { NUM_SYMBOLS, PALETTE } from '../src/palette.js';

const question = [
  [0, 1, 0],
  [2, 0, 3],
];

describe('palette', () => {
  it('has exactly ten swatches', () => {
    expect(PALETTE.length).toBe(10);
    expect(NUM_SYMBOLS).toBe(10);
    expect(new Set(PALETTE).size).toBe(10);
  });
});

describe('EditorState', () => {
  it('starts as a copy of the question', () => {
    const editor = new EditorState();
    editor.load(question);
    expect(editor.current).toEqual(question);
    expect(editor.isPristine(question)).toBe(true);
  });

  it('paint then undo restores the prior grid', () => {
    const editor = new EditorState();
    editor.load(question);
    editor.selectSymbol(7);
    editor.paint(0, 0);
    expect(editor.current[0][0]).toBe(7);
    expect(editor.undo()).toBe(true);
    expect(gridsEqual(editor.current, question)).toBe(true);
  });

  it('undo restores exact states through a paint sequence', () => {
    const editor = new EditorState();
    editor.load(question);
    const states = [editor.current];
    for (const [symbol, col, row] of [
      [5, 1, 1],
      [9, 2, 0],
      [1, 0, 1],
    ] as const) {
      editor.selectSymbol(symbol);
      editor.paint(col, row);
      states.push(editor.current);
    }
    for (let i = states.length - 2; i >= 0; i--) {
      expect(editor.undo()).toBe(true);
      expect(editor.current).toEqual(states[i]);
    }
    expect(editor.undo()).toBe(false);
  });

  it('never changes grid dimensions', () => {
    const editor = new EditorState();
    editor.load(question);
    editor.selectSymbol(4);
    editor.paint(2, 1);
    expect(editor.width).toBe(3);
    expect(editor.height).toBe(2);
    expect(() => editor.paint(3, 0)).toThrow();
    expect(() => editor.paint(0, 2)).toThrow();
    expect(editor.width).toBe(3);
  });

  it('painting the same symbol is a no-op for undo', () => {
    const editor = new EditorState();
    editor.load(question);
    editor.selectSymbol(1);
    editor.paint(1, 0); // already 1
    expect(editor.canUndo).toBe(false);
  });

  it('rejects symbols outside the alphabet', () => {
    const editor = new EditorState();
    editor.load(question);
    expect(() => editor.selectSymbol(10)).toThrow();
    expect(() => editor.selectSymbol(-1)).toThrow();
  });

  it('load clears the undo stack', () => {
    const editor = new EditorState();
    editor.load(question);
    editor.selectSymbol(6);
    editor.paint(0, 0);
    editor.load(question);
    expect(editor.canUndo).toBe(false);
  });
});
