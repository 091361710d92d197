// Session view-model: the last server view, the chat transcript, and the
// pending flag while an exchange is in flight. Inputs are gated on the
// server's legal_actions list; a move index guards against duplicate
// submission when a request has to be retried.

import { GameApi, ServiceError, View } from './api';

export interface ChatMessage {
  speaker: 'you' | 'agent' | 'system';
  text: string;
}

export type Listener = (model: SessionModel) => void;

export class SessionModel {
  view: View | null = null;
  sessionId = '';
  transcript: ChatMessage[] = [];
  pending = false;
  lastError: string | null = null;
  retry: { action: number; index: number } | null = null;
  private moveIndex = 0; // human moves submitted so far
  private listeners: Listener[] = [];

  constructor(readonly api: GameApi) {}

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this);
  }

  /** Inputs are enabled only when it is the human's turn and nothing is in flight. */
  canPlay(action?: number): boolean {
    if (this.pending || !this.view || this.view.status !== 'active') return false;
    if (this.view.to_move !== this.view.human_seat) return false;
    if (action === undefined) return true;
    return this.view.legal_actions.includes(action);
  }

  async start(options: Parameters<GameApi['createSession']>[0]): Promise<void> {
    this.pending = true;
    this.transcript = [];
    this.lastError = null;
    this.retry = null;
    this.moveIndex = 0;
    this.emit();
    try {
      const view = await this.api.createSession(options);
      this.sessionId = view.session_id ?? '';
      this.absorb(view, null);
      this.transcript.unshift({
        speaker: 'system',
        text: `New ${options.game} game vs ${options.agent}. You are the ${view.human_seat} player.`,
      });
    } catch (err) {
      this.lastError = describeError(err);
    } finally {
      this.pending = false;
      this.emit();
    }
  }

  async play(action: number): Promise<void> {
    // The gate mirrors the server: never submit an action the last view
    // does not list as legal.
    if (!this.canPlay(action)) return;
    const index = this.moveIndex;
    this.pending = true;
    this.lastError = null;
    this.emit();
    try {
      const view = await this.api.move(this.sessionId, action);
      this.moveIndex = index + 1;
      this.retry = null;
      this.transcript.push({ speaker: 'you', text: `You play ${action}.` });
      this.absorb(view, action);
    } catch (err) {
      if (err instanceof ServiceError) {
        // The server rejected the move; state is unchanged and the error is shown.
        this.lastError = `${err.code}: ${err.message}`;
      } else {
        // Transport failure: the move may or may not have landed. Reconcile
        // against the server before ever re-submitting the same index.
        await this.reconcile(action, index);
      }
    } finally {
      this.pending = false;
      this.emit();
    }
  }

  private async reconcile(action: number, index: number): Promise<void> {
    try {
      const view = await this.api.view(this.sessionId);
      const applied =
        view.to_move !== view.human_seat ||
        view.status !== 'active' ||
        !view.legal_actions.includes(action) ||
        JSON.stringify(view.state) !== JSON.stringify(this.view?.state);
      if (applied) {
        this.moveIndex = index + 1;
        this.retry = null;
        this.transcript.push({ speaker: 'you', text: `You play ${action}.` });
        this.absorb(view, action);
      } else {
        this.retry = { action, index };
        this.lastError = 'Network hiccup — your move was not received. Retry?';
      }
    } catch {
      this.retry = { action, index };
      this.lastError = 'Service unreachable — retry when back online.';
    }
  }

  async retryPending(): Promise<void> {
    const retry = this.retry;
    if (!retry || this.moveIndex !== retry.index) return; // already applied
    this.retry = null;
    await this.play(retry.action);
  }

  private absorb(view: View, _action: number | null): void {
    this.view = view;
    for (const move of view.agent_moves ?? []) {
      this.transcript.push({ speaker: 'agent', text: `Agent plays ${move}.` });
    }
    if (view.reasoning) {
      this.transcript.push({ speaker: 'agent', text: view.reasoning });
    }
    if (view.status === 'finished' && view.outcome) {
      const verdict =
        view.outcome.human_reward > 0 ? 'You win!' : view.outcome.human_reward < 0 ? 'You lose.' : 'Draw.';
      const delta =
        view.rating_delta === undefined
          ? ''
          : ` Rating ${view.rating_delta >= 0 ? '+' : ''}${view.rating_delta.toFixed(2)}.`;
      this.transcript.push({ speaker: 'system', text: verdict + delta });
    }
  }
}

export function describeError(err: unknown): string {
  if (err instanceof ServiceError) return `${err.code}: ${err.message}`;
  if (err instanceof Error) return err.message;
  return String(err);
}

const BOARD_CACHE_KEY = 'nemo-leaderboard-cache';

export interface CachedBoard {
  entries: import('./api').LeaderboardEntry[];
  fetchedAt: string;
  stale: boolean;
}

export async function loadLeaderboard(api: GameApi, limit: number, storage: Storage): Promise<CachedBoard> {
  try {
    const { entries } = await api.leaderboard(limit);
    const snapshot = { entries, fetchedAt: new Date().toISOString(), stale: false };
    storage.setItem(BOARD_CACHE_KEY, JSON.stringify(snapshot));
    return snapshot;
  } catch {
    const raw = storage.getItem(BOARD_CACHE_KEY);
    if (raw) {
      const cached = JSON.parse(raw) as CachedBoard;
      return { ...cached, stale: true };
    }
    return { entries: [], fetchedAt: '', stale: true };
  }
}
