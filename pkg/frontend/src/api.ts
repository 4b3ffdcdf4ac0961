import { Grid } from './grid.js';

export interface ContextPair {
  question: Grid;
  answer: Grid;
}

export interface SessionInfo {
  session_id: string;
  task: string;
  contexts_viewed: number;
  first_context: ContextPair;
}

export interface ContextResponse extends ContextPair {
  contexts_viewed: number;
}

export interface Puzzle {
  episode_id: string;
  question: Grid;
}

export interface AnswerVerdict {
  correct: boolean;
  streak: number;
  completed: boolean;
  contexts_viewed?: number;
  elapsed_seconds?: number;
}

export interface TaskStats {
  completed_sessions: number;
  mean_contexts: number | null;
  mean_minutes: number | null;
}

export interface StudyStats {
  tasks: Record<string, TaskStats>;
  reference: Record<string, { contexts: number; minutes: number }>;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      if (body && typeof body.detail === 'string') detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

/** Thin client for the study service; holds the session id, no verdict logic. */
export class SessionClient {
  sessionId: string | null = null;

  constructor(private baseUrl: string = '') {}

  async createSession(task: string): Promise<SessionInfo> {
    const info = await request<SessionInfo>(`${this.baseUrl}/session`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ task }),
    });
    this.sessionId = info.session_id;
    return info;
  }

  private sid(): string {
    if (!this.sessionId) throw new Error('no open session');
    return this.sessionId;
  }

  async requestContext(): Promise<ContextResponse> {
    return request<ContextResponse>(`${this.baseUrl}/session/${this.sid()}/context`, { method: 'POST' });
  }

  async getPuzzle(): Promise<Puzzle> {
    return request<Puzzle>(`${this.baseUrl}/session/${this.sid()}/puzzle`);
  }

  async submitAnswer(episodeId: string, grid: Grid): Promise<AnswerVerdict> {
    return request<AnswerVerdict>(`${this.baseUrl}/session/${this.sid()}/answer`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ episode_id: episodeId, grid }),
    });
  }

  async stats(): Promise<StudyStats> {
    return request<StudyStats>(`${this.baseUrl}/stats`);
  }
}
