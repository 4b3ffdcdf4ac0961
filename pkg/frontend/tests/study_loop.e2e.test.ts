// End-to-end study loop against the real service process, driven only
// through the HTTP interface (the same calls the browser UI makes).
import { ChildProcess, spawn } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { SessionClient } from '../src/api.js';
import { Grid, cloneGrid } from '../src/grid.js';

const PORT = 18000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

/**
 * Closure filling, reimplemented only for this script so it can play a
 * perfect participant: background cells unreachable from the border
 * (4-connectivity) take the color of their surrounding boundary.
 */
function solveClosureFilling(question: Grid): Grid {
  const h = question.length;
  const w = question[0].length;
  const reachable = Array.from({ length: h }, () => new Array<boolean>(w).fill(false));
  const stack: Array<[number, number]> = [];
  for (let r = 0; r < h; r++) {
    for (const c of [0, w - 1]) {
      if (question[r][c] === 0 && !reachable[r][c]) {
        reachable[r][c] = true;
        stack.push([r, c]);
      }
    }
  }
  for (let c = 0; c < w; c++) {
    for (const r of [0, h - 1]) {
      if (question[r][c] === 0 && !reachable[r][c]) {
        reachable[r][c] = true;
        stack.push([r, c]);
      }
    }
  }
  const deltas = [
    [1, 0],
    [-1, 0],
    [0, 1],
    [0, -1],
  ];
  while (stack.length) {
    const [r, c] = stack.pop()!;
    for (const [dr, dc] of deltas) {
      const nr = r + dr;
      const nc = c + dc;
      if (nr >= 0 && nr < h && nc >= 0 && nc < w && question[nr][nc] === 0 && !reachable[nr][nc]) {
        reachable[nr][nc] = true;
        stack.push([nr, nc]);
      }
    }
  }
  // closure questions carry one boundary color; every enclosed cell takes it
  const colors = new Set<number>();
  for (const row of question) for (const v of row) if (v !== 0) colors.add(v);
  if (colors.size !== 1) throw new Error(`expected one boundary color, saw ${colors.size}`);
  const boundary = colors.values().next().value as number;
  const answer = cloneGrid(question);
  for (let r = 0; r < h; r++) {
    for (let c = 0; c < w; c++) {
      if (question[r][c] === 0 && !reachable[r][c]) {
        answer[r][c] = boundary;
      }
    }
  }
  return answer;
}

async function waitReady(): Promise<void> {
  for (let i = 0; i < 120; i++) {
    try {
      const res = await fetch(`${BASE}/stats`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error('service did not come up');
}

beforeAll(async () => {
  const journal = join(mkdtempSync(join(tmpdir(), 'study-')), 'journal.jsonl');
  server = spawn('python3', ['-m', 'pqa.service', '--addr', `127.0.0.1:${PORT}`, '--seed', '17', '--journal', journal], {
    stdio: 'ignore',
  });
  await waitReady();
}, 60_000);

afterAll(() => {
  server?.kill();
});

describe('scripted human-study session', () => {
  it(
    'opens t1, views 2 contexts, completes with 3 correct answers, appears in stats',
    async () => {
      const client = new SessionClient(BASE);
      const info = await client.createSession('t1');
      expect(info.contexts_viewed).toBe(1);

      const ctx = await client.requestContext();
      expect(ctx.contexts_viewed).toBe(2);
      // the exemplar answer obeys the law this script knows how to apply
      expect(solveClosureFilling(ctx.question)).toEqual(ctx.answer);

      let completed = false;
      for (let i = 1; i <= 3; i++) {
        const puzzle = await client.getPuzzle();
        const verdict = await client.submitAnswer(puzzle.episode_id, solveClosureFilling(puzzle.question));
        expect(verdict.correct).toBe(true);
        expect(verdict.streak).toBe(i);
        completed = verdict.completed;
        if (completed) {
          expect(verdict.contexts_viewed).toBe(2);
          expect(verdict.elapsed_seconds).toBeGreaterThan(0);
        }
      }
      expect(completed).toBe(true);

      const stats = await client.stats();
      expect(stats.tasks.t1.completed_sessions).toBe(1);
      expect(stats.tasks.t1.mean_contexts).toBe(2);
      expect(stats.tasks.t1.mean_minutes).toBeGreaterThan(0);
      // reference values are displayed, never asserted against live data
      expect(stats.reference.t1).toEqual({ contexts: 1.5, minutes: 2.48 });
    },
    60_000,
  );

  it(
    'an incorrect submission resets the streak',
    async () => {
      const client = new SessionClient(BASE);
      await client.createSession('t1');
      let puzzle = await client.getPuzzle();
      const first = await client.submitAnswer(puzzle.episode_id, solveClosureFilling(puzzle.question));
      expect(first.streak).toBe(1);

      puzzle = await client.getPuzzle();
      const wrong = await client.submitAnswer(puzzle.episode_id, puzzle.question); // unmodified question is never the answer
      expect(wrong.correct).toBe(false);
      expect(wrong.streak).toBe(0);
      expect(wrong.completed).toBe(false);

      // recovery still requires three consecutive correct answers
      for (let i = 1; i <= 3; i++) {
        puzzle = await client.getPuzzle();
        const verdict = await client.submitAnswer(puzzle.episode_id, solveClosureFilling(puzzle.question));
        expect(verdict.streak).toBe(i);
        if (i === 3) expect(verdict.completed).toBe(true);
      }
    },
    60_000,
  );

  it(
    'completed sessions refuse additional contexts',
    async () => {
      const client = new SessionClient(BASE);
      await client.createSession('t1');
      for (let i = 1; i <= 3; i++) {
        const puzzle = await client.getPuzzle();
        await client.submitAnswer(puzzle.episode_id, solveClosureFilling(puzzle.question));
      }
      await expect(client.requestContext()).rejects.toMatchObject({ status: 409 });
    },
    60_000,
  );
});
