// Typed client for the game service HTTP API. The server is authoritative:
// the client renders views and never computes game logic of its own.

export type Seat = 'first' | 'second';

export interface Outcome {
  result: string;
  winner: Seat | null;
  human_reward: -1 | 0 | 1;
}

export interface View {
  session_id?: string;
  game: string;
  config: { game: string; params: Record<string, number> };
  state: Record<string, unknown>;
  legal_actions: number[];
  to_move: Seat;
  human_seat: Seat;
  participant: string;
  agent: string;
  status: 'active' | 'finished' | 'abandoned';
  outcome?: Outcome;
  rating_delta?: number;
  agent_moves?: number[];
  reasoning?: string;
}

export interface LeaderboardEntry {
  participant: string;
  rating: number;
  games: number;
  wins: number;
  draws: number;
  losses: number;
}

export interface ApiError {
  code: string;
  message: string;
}

export class ServiceError extends Error {
  code: string;
  constructor(err: ApiError) {
    super(err.message);
    this.code = err.code;
  }
}

export interface StartOptions {
  game: string;
  params: Record<string, number>;
  agent: string;
  participant: string;
  seed?: number;
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const reply = await fetch(base + path, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  });
  const body = await reply.json();
  if (!reply.ok) {
    throw new ServiceError((body.error ?? { code: 'INTERNAL', message: 'unknown error' }) as ApiError);
  }
  return body as T;
}

export class GameApi {
  constructor(readonly base: string = '') {}

  health(): Promise<{ status: string }> {
    return request(this.base, '/api/health');
  }

  createSession(options: StartOptions): Promise<View> {
    return request(this.base, '/api/sessions', {
      method: 'POST',
      body: JSON.stringify({
        game: options.game,
        config: options.params,
        agent: options.agent,
        participant: options.participant,
        seed: options.seed,
      }),
    });
  }

  view(sessionId: string): Promise<View> {
    return request(this.base, `/api/sessions/${sessionId}`);
  }

  move(sessionId: string, action: number): Promise<View> {
    return request(this.base, `/api/sessions/${sessionId}/moves`, {
      method: 'POST',
      body: JSON.stringify({ action }),
    });
  }

  leaderboard(limit = 20): Promise<{ entries: LeaderboardEntry[] }> {
    return request(this.base, `/api/leaderboard?limit=${limit}`);
  }
}
