// Pure view -> DOM rendering. Boards are drawn only from the server's last
// view; the client adds no game logic beyond disabling illegal inputs.

import { LeaderboardEntry, View } from './api';
import { ChatMessage, SessionModel } from './state';

const CELL_NAMES = [
  'Top-Left', 'Top-Center', 'Top-Right',
  'Middle-Left', 'Center', 'Middle-Right',
  'Bottom-Left', 'Bottom-Center', 'Bottom-Right',
];

export type MoveHandler = (action: number) => void;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

function actionButton(model: SessionModel, action: number, label: string, onMove: MoveHandler): HTMLButtonElement {
  const button = el('button', { class: 'action', 'data-action': String(action) }, label);
  button.disabled = !model.canPlay(action);
  button.addEventListener('click', () => onMove(action));
  return button;
}

function renderTicTacToe(model: SessionModel, view: View, onMove: MoveHandler): HTMLElement {
  const cells = String(view.state.cells);
  const grid = el('div', { class: 'board ttt-grid', role: 'grid' });
  for (let i = 0; i < 9; i++) {
    const mark = cells[i];
    if (mark === '.') {
      const button = actionButton(model, i, String(i), onMove);
      button.classList.add('ttt-cell');
      button.title = CELL_NAMES[i];
      grid.appendChild(button);
    } else {
      const cell = el('div', { class: 'ttt-cell taken', 'data-cell': String(i) }, mark);
      grid.appendChild(cell);
    }
  }
  return grid;
}

function renderNim(model: SessionModel, view: View, onMove: MoveHandler): HTMLElement {
  const remaining = Number(view.state.remaining);
  const wrap = el('div', { class: 'board nim-board' });
  const pile = el('div', { class: 'nim-pile' });
  pile.appendChild(el('span', { class: 'nim-count' }, String(remaining)));
  pile.appendChild(el('span', {}, remaining === 1 ? ' stone left' : ' stones left'));
  const dots = el('div', { class: 'nim-dots' });
  for (let i = 0; i < Math.min(remaining, 40); i++) dots.appendChild(el('span', { class: 'stone' }, '●'));
  wrap.appendChild(pile);
  wrap.appendChild(dots);
  const controls = el('div', { class: 'controls' });
  for (const take of view.legal_actions) {
    controls.appendChild(actionButton(model, take, `take ${take}`, onMove));
  }
  wrap.appendChild(controls);
  return wrap;
}

function renderEuclid(model: SessionModel, view: View, onMove: MoveHandler): HTMLElement {
  const a = Number(view.state.a);
  const b = Number(view.state.b);
  const wrap = el('div', { class: 'board euclid-board' });
  wrap.appendChild(el('div', { class: 'pile' }, `large pile: ${a}`));
  wrap.appendChild(el('div', { class: 'pile' }, `small pile: ${b}`));
  const controls = el('div', { class: 'controls' });
  for (const m of view.legal_actions) {
    controls.appendChild(actionButton(model, m, `remove ${m} × ${b}`, onMove));
  }
  wrap.appendChild(controls);
  return wrap;
}

function renderMancala(model: SessionModel, view: View, onMove: MoveHandler): HTMLElement {
  const pits = view.state.pits as number[];
  const n = Number(view.state.pits_per_side);
  const wrap = el('div', { class: 'board mancala-board' });
  const topRow = el('div', { class: 'mancala-row top' });
  const bottomRow = el('div', { class: 'mancala-row bottom' });
  // top row renders right-to-left so pit n+1 sits above the human's rightmost pit
  for (let i = 2 * n; i >= n + 1; i--) {
    topRow.appendChild(pitNode(model, view, pits, i, onMove));
  }
  for (let i = 0; i < n; i++) {
    bottomRow.appendChild(pitNode(model, view, pits, i, onMove));
  }
  const stores = el('div', { class: 'mancala-stores' });
  stores.appendChild(el('div', { class: 'store', 'data-store': 'second' }, `top store: ${pits[2 * n + 1]}`));
  stores.appendChild(el('div', { class: 'store', 'data-store': 'first' }, `your store: ${pits[n]}`));
  wrap.appendChild(topRow);
  wrap.appendChild(bottomRow);
  wrap.appendChild(stores);
  return wrap;
}

function pitNode(model: SessionModel, view: View, pits: number[], index: number, onMove: MoveHandler): HTMLElement {
  if (view.legal_actions.includes(index) && view.to_move === view.human_seat) {
    const button = actionButton(model, index, `${index}\n${pits[index]}`, onMove);
    button.classList.add('pit');
    return button;
  }
  const node = el('div', { class: 'pit inert', 'data-pit': String(index) });
  node.appendChild(el('div', { class: 'pit-index' }, String(index)));
  node.appendChild(el('div', { class: 'pit-count' }, String(pits[index])));
  return node;
}

export function renderBoard(model: SessionModel, onMove: MoveHandler): HTMLElement {
  const view = model.view;
  if (!view) return el('div', { class: 'board empty' }, 'Start a game to see the board.');
  switch (view.game) {
    case 'tictactoe':
      return renderTicTacToe(model, view, onMove);
    case 'nim':
      return renderNim(model, view, onMove);
    case 'euclid':
      return renderEuclid(model, view, onMove);
    case 'mancala':
      return renderMancala(model, view, onMove);
    default:
      return el('div', { class: 'board empty' }, `Unknown game ${view.game}`);
  }
}

export function renderTranscript(messages: ChatMessage[]): HTMLElement {
  const list = el('div', { class: 'transcript', 'aria-live': 'polite' });
  for (const message of messages) {
    const bubble = el('div', { class: `bubble ${message.speaker}` });
    bubble.appendChild(el('span', { class: 'speaker' }, message.speaker));
    bubble.appendChild(el('span', { class: 'text' }, message.text));
    list.appendChild(bubble);
  }
  return list;
}

export function renderStatus(model: SessionModel): HTMLElement {
  const view = model.view;
  const bar = el('div', { class: 'status-bar' });
  if (!view) {
    bar.appendChild(el('span', {}, 'No game in progress.'));
    return bar;
  }
  if (view.status === 'finished' && view.outcome) {
    const verdict =
      view.outcome.human_reward > 0 ? 'You win' : view.outcome.human_reward < 0 ? 'You lose' : 'Draw';
    const banner = el('div', { class: `banner ${verdict === 'You win' ? 'win' : verdict === 'Draw' ? 'draw' : 'loss'}` });
    banner.appendChild(el('strong', { 'data-role': 'outcome' }, verdict));
    if (view.rating_delta !== undefined) {
      const sign = view.rating_delta >= 0 ? '+' : '';
      banner.appendChild(el('span', { 'data-role': 'delta' }, ` rating ${sign}${view.rating_delta.toFixed(2)}`));
    }
    bar.appendChild(banner);
  } else if (model.pending) {
    bar.appendChild(el('span', { class: 'pending' }, 'Waiting for the agent…'));
  } else if (view.to_move === view.human_seat) {
    bar.appendChild(el('span', {}, 'Your turn.'));
  } else {
    bar.appendChild(el('span', {}, 'Agent to move.'));
  }
  if (model.lastError) {
    const error = el('div', { class: 'error', 'data-role': 'error' }, model.lastError);
    if (model.retry) {
      const retryButton = el('button', { class: 'retry' }, 'Retry move');
      retryButton.addEventListener('click', () => void model.retryPending());
      error.appendChild(retryButton);
    }
    bar.appendChild(error);
  }
  return bar;
}

export function renderLeaderboard(
  entries: LeaderboardEntry[],
  highlight: string,
  stale: boolean,
  fetchedAt: string,
): HTMLElement {
  const wrap = el('div', { class: 'leaderboard' });
  if (stale) {
    wrap.appendChild(
      el('div', { class: 'stale-note', 'data-role': 'stale' },
        fetchedAt ? `Offline — showing snapshot from ${fetchedAt}` : 'Offline — no snapshot available'),
    );
  }
  if (!entries.length) {
    wrap.appendChild(el('div', { class: 'empty-board' }, 'Nobody on the board yet. Finish a game!'));
    return wrap;
  }
  const table = el('table', { class: 'board-table' });
  const head = el('tr');
  for (const title of ['#', 'player', 'rating', 'W', 'D', 'L']) head.appendChild(el('th', {}, title));
  table.appendChild(head);
  entries.forEach((entry, i) => {
    const row = el('tr', entry.participant === highlight ? { class: 'me', 'data-me': '1' } : {});
    row.appendChild(el('td', {}, String(i + 1)));
    row.appendChild(el('td', {}, entry.participant));
    row.appendChild(el('td', {}, entry.rating.toFixed(1)));
    row.appendChild(el('td', {}, String(entry.wins)));
    row.appendChild(el('td', {}, String(entry.draws)));
    row.appendChild(el('td', {}, String(entry.losses)));
    table.appendChild(row);
  });
  wrap.appendChild(table);
  return wrap;
}
