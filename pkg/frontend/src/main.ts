import { GameApi } from './api';
import { renderBoard, renderLeaderboard, renderStatus, renderTranscript } from './render';
import { SessionModel, loadLeaderboard } from './state';
import './style.css';

const GAME_PARAMS: Record<string, { key: string; label: string; value: number }[]> = {
  tictactoe: [],
  nim: [
    { key: 'n', label: 'stones', value: 8 },
    { key: 'k', label: 'max take', value: 3 },
  ],
  euclid: [
    { key: 'a', label: 'pile a', value: 34 },
    { key: 'b', label: 'pile b', value: 21 },
  ],
  mancala: [
    { key: 'pits_per_side', label: 'pits per side', value: 6 },
    { key: 'seeds_per_pit', label: 'seeds per pit', value: 4 },
  ],
};

const AGENTS = ['dictionary', 'exact', 'minimax:easy', 'minimax:medium', 'minimax:hard', 'llm:auto', 'random'];

export function mount(root: HTMLElement, api: GameApi): SessionModel {
  const model = new SessionModel(api);
  root.innerHTML = `
    <header>
      <h1>Game Playground</h1>
      <nav>
        <button id="tab-play" class="tab active">play</button>
        <button id="tab-board" class="tab">leaderboard</button>
      </nav>
    </header>
    <section id="setup">
      <label>name <input id="participant" value="anonymous" /></label>
      <label>game <select id="game"></select></label>
      <span id="params"></span>
      <label>opponent <select id="agent"></select></label>
      <button id="start">start game</button>
    </section>
    <main>
      <div id="play-screen">
        <div id="status"></div>
        <div id="board"></div>
        <div id="chat"></div>
      </div>
      <div id="board-screen" hidden>
        <label>show top <input id="limit" type="number" value="10" min="1" /></label>
        <button id="refresh-board">refresh</button>
        <div id="board-table"></div>
      </div>
    </main>
  `;

  const gameSelect = root.querySelector<HTMLSelectElement>('#game')!;
  for (const game of Object.keys(GAME_PARAMS)) {
    const option = document.createElement('option');
    option.value = game;
    option.textContent = game;
    gameSelect.appendChild(option);
  }
  const agentSelect = root.querySelector<HTMLSelectElement>('#agent')!;
  for (const agent of AGENTS) {
    const option = document.createElement('option');
    option.value = agent;
    option.textContent = agent;
    agentSelect.appendChild(option);
  }

  const paramsSpan = root.querySelector<HTMLElement>('#params')!;
  function renderParams(): void {
    paramsSpan.innerHTML = '';
    for (const param of GAME_PARAMS[gameSelect.value]) {
      const label = document.createElement('label');
      label.textContent = param.label + ' ';
      const input = document.createElement('input');
      input.type = 'number';
      input.min = '1';
      input.value = String(param.value);
      input.dataset.param = param.key;
      label.appendChild(input);
      paramsSpan.appendChild(label);
    }
  }
  renderParams();
  gameSelect.addEventListener('change', renderParams);

  const statusHost = root.querySelector<HTMLElement>('#status')!;
  const boardHost = root.querySelector<HTMLElement>('#board')!;
  const chatHost = root.querySelector<HTMLElement>('#chat')!;

  const onMove = (action: number): void => void model.play(action);
  model.onChange(() => {
    statusHost.replaceChildren(renderStatus(model));
    boardHost.replaceChildren(renderBoard(model, onMove));
    chatHost.replaceChildren(renderTranscript(model.transcript));
    chatHost.scrollTop = chatHost.scrollHeight;
  });

  root.querySelector<HTMLButtonElement>('#start')!.addEventListener('click', () => {
    const params: Record<string, number> = {};
    for (const input of paramsSpan.querySelectorAll<HTMLInputElement>('input[data-param]')) {
      params[input.dataset.param!] = Number(input.value);
    }
    const agent = agentSelect.value === 'llm:auto' ? `llm:${gameSelect.value}_move` : agentSelect.value;
    void model.start({
      game: gameSelect.value,
      params,
      agent,
      participant: root.querySelector<HTMLInputElement>('#participant')!.value || 'anonymous',
    });
  });

  // leaderboard screen
  const playScreen = root.querySelector<HTMLElement>('#play-screen')!;
  const boardScreen = root.querySelector<HTMLElement>('#board-screen')!;
  const tableHost = root.querySelector<HTMLElement>('#board-table')!;
  async function refreshBoard(): Promise<void> {
    const limit = Number(root.querySelector<HTMLInputElement>('#limit')!.value) || 10;
    const me = root.querySelector<HTMLInputElement>('#participant')!.value;
    const snapshot = await loadLeaderboard(api, limit, window.localStorage);
    tableHost.replaceChildren(renderLeaderboard(snapshot.entries, me, snapshot.stale, snapshot.fetchedAt));
  }
  root.querySelector<HTMLButtonElement>('#tab-play')!.addEventListener('click', () => {
    playScreen.hidden = false;
    boardScreen.hidden = true;
  });
  root.querySelector<HTMLButtonElement>('#tab-board')!.addEventListener('click', () => {
    playScreen.hidden = true;
    boardScreen.hidden = false;
    void refreshBoard();
  });
  root.querySelector<HTMLButtonElement>('#refresh-board')!.addEventListener('click', () => void refreshBoard());

  return model;
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mount(document.getElementById('app')!, new GameApi(''));
}
