/** DOM wiring for the coach console. All scoring goes through the service;
 * this file only renders state and forwards events. */

import { createApi } from './api';
import { buildComparison } from './comparison';
import { formatDelta, formatScore, levelColor } from './format';
import { createLiveScorer } from './scorePanel';
import {
  applyEvaluation,
  initialState,
  markOffline,
  setDraftValue,
  setRoster,
  toggleSelected,
} from './state';
import type { ConsoleState } from './state';
import { computeWhatIfDeltas } from './whatif';
import {
  ATTRIBUTES,
  ATTRIBUTE_LABELS,
  HEIGHT_ATTRIBUTE,
  HEIGHT_RANGE,
  RATING_RANGE,
} from './types';
import type { Attribute } from './types';
import './styles.css';

const api = createApi();
const scorer = createLiveScorer(api);
let state: ConsoleState = initialState();

const $ = <T extends HTMLElement>(selector: string): T => {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
};

function sliderRow(attribute: Attribute): HTMLElement {
  const range = attribute === HEIGHT_ATTRIBUTE ? HEIGHT_RANGE : RATING_RANGE;
  const row = document.createElement('div');
  row.className = 'slider-row';
  row.innerHTML = `
    <label for="slider-${attribute}">${ATTRIBUTE_LABELS[attribute]}</label>
    <input id="slider-${attribute}" type="range"
           min="${range.min}" max="${range.max}" step="${range.step}"
           value="${state.draft[attribute]}">
    <output id="value-${attribute}">${state.draft[attribute]}</output>
    <div class="degree-bar"><div id="degree-${attribute}" class="degree-fill"></div></div>
  `;
  const input = row.querySelector('input')!;
  input.addEventListener('input', () => {
    state = setDraftValue(state, attribute, Number(input.value));
    row.querySelector('output')!.textContent = String(state.draft[attribute]);
    scorer.update(state.draft);
    renderScore();
  });
  return row;
}

function renderScore(): void {
  const snap = scorer.snapshot();
  const banner = $('#offline-banner');
  banner.hidden = snap.status !== 'offline';
  $('#stale-indicator').hidden = !(snap.stale && snap.status !== 'offline');
  if (!snap.response) return;
  const { response } = snap;
  $('#score-value').textContent = formatScore(response);
  const badge = $('#level-badge');
  badge.textContent = response.level;
  badge.style.backgroundColor = levelColor(response.level);
  for (const attribute of ATTRIBUTES) {
    const table = response.degrees[attribute];
    if (!table) continue;
    const favorable = attribute === HEIGHT_ATTRIBUTE ? 'tall' : 'good';
    const fill = document.getElementById(`degree-${attribute}`);
    if (fill) fill.style.width = `${(table[favorable] ?? 0) * 100}%`;
  }
}

async function refreshRoster(): Promise<void> {
  try {
    state = setRoster(state, await api.listCandidates());
  } catch {
    state = markOffline(state);
  }
  renderRoster();
  renderComparison();
}

function renderRoster(): void {
  const list = $('#roster-list');
  list.innerHTML = '';
  for (const record of state.roster) {
    const item = document.createElement('li');
    const checked = state.selected.includes(record.id);
    item.innerHTML = `
      <input type="checkbox" ${checked ? 'checked' : ''} data-id="${record.id}">
      <span class="roster-name">${record.name}</span>
      <span class="roster-score">${record.score.toFixed(1)}</span>
      <span class="roster-level" style="background:${levelColor(record.level)}">${record.level}</span>
      ${record.tied ? '<span class="tie-badge">tied</span>' : ''}
      <button data-remove="${record.id}" title="remove">x</button>
    `;
    item.querySelector('input')!.addEventListener('change', () => {
      state = toggleSelected(state, record.id);
      renderRoster();
      renderComparison();
    });
    item.querySelector('button')!.addEventListener('click', async () => {
      await api.deleteCandidate(record.id).catch(() => (state = markOffline(state)));
      await refreshRoster();
    });
    list.appendChild(item);
  }
}

function renderComparison(): void {
  const view = buildComparison(state.roster, state.selected);
  const host = $('#comparison');
  if (view.kind === 'prompt') {
    host.innerHTML = `<p class="prompt">${view.message}</p>`;
    return;
  }
  const header = view.columns
    .map(
      (c) => `<th>${c.name}<br>
        <span class="cmp-score">${c.displayScore}</span>
        ${c.tied ? '<span class="tie-badge">tied</span>' : ''}<br>
        <span class="roster-level" style="background:${levelColor(c.level)}">${c.level}</span></th>`,
    )
    .join('');
  const rows = ATTRIBUTES.map((attribute, i) => {
    const cells = view.columns
      .map((c) => `<td class="${c.cells[i].isMax ? 'max-cell' : ''}">${c.cells[i].value}</td>`)
      .join('');
    return `<tr><th>${ATTRIBUTE_LABELS[attribute]}</th>${cells}</tr>`;
  }).join('');
  host.innerHTML = `<table><thead><tr><th></th>${header}</tr></thead><tbody>${rows}</tbody></table>`;
}

async function renderWhatIf(): Promise<void> {
  const host = $('#whatif-list');
  host.innerHTML = '<li>computing...</li>';
  try {
    const deltas = await computeWhatIfDeltas(api, state.draft);
    host.innerHTML = '';
    for (const d of deltas) {
      const item = document.createElement('li');
      item.innerHTML = `<span>${d.label}</span>
        <strong>${d.clamped ? 'at max' : formatDelta(d.delta)}</strong>`;
      host.appendChild(item);
    }
  } catch {
    state = markOffline(state);
    host.innerHTML = '<li>service unreachable</li>';
    renderScore();
  }
}

function wire(): void {
  const sliders = $('#sliders');
  for (const attribute of ATTRIBUTES) sliders.appendChild(sliderRow(attribute));

  scorer.subscribe(() => {
    state = scorer.snapshot().response
      ? applyEvaluation(state, scorer.snapshot().response!)
      : scorer.snapshot().status === 'offline'
        ? markOffline(state)
        : state;
    renderScore();
  });

  $('#save-button').addEventListener('click', async () => {
    const nameInput = $('#candidate-name') as HTMLInputElement;
    const name = nameInput.value.trim() || `Candidate ${state.roster.length + 1}`;
    try {
      await api.createCandidate(name, state.draft);
      nameInput.value = '';
      await refreshRoster();
    } catch {
      state = markOffline(state);
      renderScore();
    }
  });

  $('#whatif-button').addEventListener('click', () => void renderWhatIf());

  scorer.update(state.draft);
  void refreshRoster();
}

wire();
