import { ApiError, SessionClient, StudyStats } from './api.js';
import { EditorState } from './editor.js';
import { Grid } from './grid.js';
import { NUM_SYMBOLS, PALETTE } from './palette.js';

const TASKS = ['t1', 't2', 't3', 't4', 't5', 't6', 't7'];

const client = new SessionClient('');
const editor = new EditorState();

let currentTask = 't1';
let currentQuestion: Grid = [];
let currentEpisodeId: string | null = null;
let contextsViewed = 0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderGrid(container: HTMLElement, grid: Grid, onPaint?: (col: number, row: number) => void): void {
  container.innerHTML = '';
  container.style.gridTemplateColumns = `repeat(${grid[0]?.length ?? 0}, 1fr)`;
  grid.forEach((row, r) => {
    row.forEach((symbol, c) => {
      const cell = document.createElement('div');
      cell.className = 'cell';
      cell.style.background = PALETTE[symbol];
      if (onPaint) {
        cell.classList.add('editable');
        cell.addEventListener('click', () => onPaint(c, r));
      }
      container.appendChild(cell);
    });
  });
}

function renderEditor(): void {
  renderGrid(el('editor-grid'), editor.current, (col, row) => {
    editor.paint(col, row);
    renderEditor();
  });
  el<HTMLButtonElement>('undo-btn').disabled = !editor.canUndo;
}

function renderPalette(): void {
  const bar = el('palette');
  bar.innerHTML = '';
  for (let s = 0; s < NUM_SYMBOLS; s++) {
    const swatch = document.createElement('button');
    swatch.className = 'swatch' + (editor.selectedSymbol === s ? ' selected' : '');
    swatch.style.background = PALETTE[s];
    swatch.title = `symbol ${s}`;
    swatch.addEventListener('click', () => {
      editor.selectSymbol(s);
      renderPalette();
    });
    bar.appendChild(swatch);
  }
}

function setStatus(text: string, kind: 'info' | 'good' | 'bad' = 'info'): void {
  const node = el('status');
  node.textContent = text;
  node.className = `status ${kind}`;
}

function renderStreak(streak: number): void {
  const dots = el('streak');
  dots.innerHTML = '';
  for (let i = 0; i < 3; i++) {
    const d = document.createElement('span');
    d.className = 'dot' + (i < streak ? ' lit' : '');
    dots.appendChild(d);
  }
}

function showContext(question: Grid, answer: Grid): void {
  renderGrid(el('context-question'), question);
  renderGrid(el('context-answer'), answer);
  el('context-counter').textContent = `examples viewed: ${contextsViewed}`;
}

async function loadPuzzle(): Promise<void> {
  const puzzle = await client.getPuzzle();
  currentEpisodeId = puzzle.episode_id;
  currentQuestion = puzzle.question;
  renderGrid(el('puzzle-question'), currentQuestion);
  editor.load(currentQuestion);
  renderEditor();
}

async function startSession(): Promise<void> {
  el('completion').hidden = true;
  const info = await client.createSession(currentTask);
  contextsViewed = info.contexts_viewed;
  showContext(info.first_context.question, info.first_context.answer);
  renderStreak(0);
  setStatus(`studying ${currentTask}: infer the rule from the example, then solve the test`);
  await loadPuzzle();
}

async function anotherExample(): Promise<void> {
  try {
    const ctx = await client.requestContext();
    contextsViewed = ctx.contexts_viewed;
    showContext(ctx.question, ctx.answer);
  } catch (e) {
    surface(e);
  }
}

async function submit(): Promise<void> {
  if (!currentEpisodeId) return;
  try {
    const verdict = await client.submitAnswer(currentEpisodeId, editor.current);
    renderStreak(verdict.streak);
    if (verdict.completed) {
      const minutes = ((verdict.elapsed_seconds ?? 0) / 60).toFixed(2);
      el('completion').hidden = false;
      el('completion-body').textContent =
        `Rule learned! ${verdict.contexts_viewed} example(s) viewed, ${minutes} min elapsed.`;
      setStatus('session complete', 'good');
      await refreshStats();
      return;
    }
    if (verdict.correct) {
      setStatus(`correct! ${3 - verdict.streak} more in a row to finish`, 'good');
    } else {
      setStatus('not quite; the streak resets, study another example if needed', 'bad');
    }
    await loadPuzzle();
  } catch (e) {
    surface(e);
  }
}

function surface(e: unknown): void {
  if (e instanceof ApiError) {
    setStatus(`${e.detail} (HTTP ${e.status}); retry or start a new session`, 'bad');
  } else {
    setStatus(String(e), 'bad');
  }
}

async function refreshStats(): Promise<void> {
  const stats: StudyStats = await client.stats();
  const tbody = el('stats-body');
  tbody.innerHTML = '';
  for (const task of TASKS) {
    const live = stats.tasks[task];
    const ref = stats.reference[task];
    const row = document.createElement('tr');
    const fmt = (v: number | null, digits = 2) => (v === null ? '-' : v.toFixed(digits));
    row.innerHTML =
      `<td>${task}</td><td>${live.completed_sessions}</td>` +
      `<td>${fmt(live.mean_contexts)}</td><td>${fmt(live.mean_minutes)}</td>` +
      `<td class="ref">${ref.contexts}</td><td class="ref">${ref.minutes}</td>`;
    tbody.appendChild(row);
  }
}

export function boot(): void {
  const picker = el<HTMLSelectElement>('task-picker');
  for (const task of TASKS) {
    const opt = document.createElement('option');
    opt.value = task;
    opt.textContent = task;
    picker.appendChild(opt);
  }
  picker.addEventListener('change', () => {
    currentTask = picker.value;
  });
  el('start-btn').addEventListener('click', () => startSession().catch(surface));
  el('context-btn').addEventListener('click', () => anotherExample());
  el('undo-btn').addEventListener('click', () => {
    editor.undo();
    renderEditor();
  });
  el('reset-btn').addEventListener('click', () => {
    editor.load(currentQuestion);
    renderEditor();
  });
  el('submit-btn').addEventListener('click', () => submit());
  renderPalette();
  refreshStats().catch(() => setStatus('service unreachable', 'bad'));
}

boot();
