import { Turn, TurnOutcome } from './state.js';
import { ApiSpec, CatalogEntry, ResultTable, TraceEntry, Violation } from './types.js';

export type { TurnOutcome };

// Plain DOM builders; no framework. Every element the tests need carries a
// data-role attribute.

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderTable(table: ResultTable): HTMLTableElement {
  const root = el('table', 'result-table');
  root.dataset.role = 'result-table';
  const head = root.createTHead().insertRow();
  for (const column of table.columns) {
    const cell = document.createElement('th');
    cell.textContent = column;
    head.appendChild(cell);
  }
  const body = root.createTBody();
  if (table.rows.length === 0) {
    const row = body.insertRow();
    const cell = row.insertCell();
    cell.colSpan = Math.max(1, table.columns.length);
    cell.className = 'empty';
    cell.textContent = '(no rows)';
  }
  for (const values of table.rows) {
    const row = body.insertRow();
    for (const value of values) {
      row.insertCell().textContent = String(value);
    }
  }
  return root;
}

export function renderTrace(trace: TraceEntry[]): HTMLDetailsElement {
  const details = el('details', 'trace');
  details.dataset.role = 'trace';
  details.appendChild(el('summary', undefined, `trace (${trace.length} steps)`));
  const list = el('ul');
  for (const entry of trace) {
    const item = el('li');
    item.appendChild(el('span', 'stage', entry.stage));
    item.appendChild(
      el('span', 'digest', entry.prompt_digest ? ` ${entry.prompt_digest}` : ''),
    );
    const output = el('pre', 'raw-output');
    output.textContent = entry.raw_output;
    item.appendChild(output);
    list.appendChild(item);
  }
  details.appendChild(list);
  return details;
}

export function renderViolations(violations: Violation[]): HTMLElement {
  const box = el('div', 'violations');
  box.dataset.role = 'violations';
  const list = el('ul');
  for (const violation of violations) {
    list.appendChild(el('li', undefined, `${violation.code}: ${violation.message}`));
  }
  box.appendChild(el('strong', undefined, 'command rejected'));
  box.appendChild(list);
  return box;
}

export interface TurnHandlers {
  /** Re-execute an edited command (what-if path); absent disables editing. */
  onExecuteEdit?: (turn: Turn, commandText: string) => void;
}

export function renderTurn(turn: Turn, handlers: TurnHandlers = {}): HTMLElement {
  const root = el('section', `turn turn-${turn.outcome.kind}`);
  root.dataset.role = 'turn';
  root.dataset.turnId = String(turn.id);
  const header = el('header');
  header.appendChild(el('span', 'query', turn.query));
  if (turn.manual) {
    const badge = el('span', 'badge manual', 'manual');
    badge.dataset.role = 'manual-badge';
    header.appendChild(badge);
  }
  root.appendChild(header);

  const outcome = turn.outcome;
  if (outcome.kind === 'answered') {
    if (outcome.command) {
      const badge = el('span', 'badge api-id', outcome.command.api_id);
      badge.dataset.role = 'api-badge';
      root.appendChild(badge);
    }
    if (outcome.canonical) {
      const canonical = el('code', 'canonical-command', outcome.canonical);
      canonical.dataset.role = 'canonical-command';
      root.appendChild(canonical);
    }
    if (outcome.table) root.appendChild(renderTable(outcome.table));
    if (outcome.trace) {
      const trace = renderTrace(outcome.trace);
      if (outcome.command) {
        const pretty = el('pre', 'pretty-command');
        pretty.dataset.role = 'pretty-command';
        pretty.textContent = JSON.stringify(outcome.command, null, 2);
        trace.appendChild(pretty);
      }
      root.appendChild(trace);
    }
    if (handlers.onExecuteEdit && outcome.canonical) {
      const editor = el('div', 'what-if');
      editor.dataset.role = 'what-if';
      const textarea = el('textarea');
      textarea.value = outcome.canonical;
      textarea.rows = 3;
      const run = el('button', undefined, 'run edited command');
      run.type = 'button';
      run.addEventListener('click', () => handlers.onExecuteEdit!(turn, textarea.value));
      editor.appendChild(textarea);
      editor.appendChild(run);
      root.appendChild(editor);
    }
  } else if (outcome.kind === 'clarify') {
    const bubble = el('p', 'clarification', outcome.clarification ?? '');
    bubble.dataset.role = 'clarification';
    root.appendChild(bubble);
  } else {
    const message = el('p', 'failure', outcome.error ?? 'request failed');
    message.dataset.role = 'failure';
    root.appendChild(message);
    if (outcome.violations) root.appendChild(renderViolations(outcome.violations));
    if (outcome.trace) root.appendChild(renderTrace(outcome.trace));
  }
  return root;
}

export function renderCatalogList(
  apis: CatalogEntry[],
  onSelect: (apiId: string) => void,
): HTMLElement {
  const root = el('nav', 'catalog-list');
  root.dataset.role = 'catalog-list';
  if (apis.length === 0) {
    root.appendChild(el('p', 'empty', 'no APIs in the catalog'));
    return root;
  }
  const list = el('ul');
  for (const api of apis) {
    const item = el('li');
    const button = el('button', undefined, `${api.api_id} ${api.display_name}`);
    button.type = 'button';
    button.dataset.apiId = api.api_id;
    button.addEventListener('click', () => onSelect(api.api_id));
    item.appendChild(button);
    list.appendChild(item);
  }
  root.appendChild(list);
  return root;
}

export function exampleQueryFor(spec: ApiSpec): string {
  const output = spec.outputs[0];
  const phrase = output ? output.meaning || output.name : 'details';
  return `What is the ${phrase} of "Company XXX" in 2020?`;
}

export function renderApiPanel(
  spec: ApiSpec,
  onTryExample: (query: string) => void,
): HTMLElement {
  const root = el('article', 'api-panel');
  root.dataset.role = 'api-panel';
  root.appendChild(el('h3', undefined, `${spec.api_id} — ${spec.display_name}`));
  if (spec.description) root.appendChild(el('p', 'description', spec.description));

  const renderArgs = (title: string, args: ApiSpec['inputs'], withRequired: boolean) => {
    root.appendChild(el('h4', undefined, title));
    const list = el('ul', 'args');
    for (const arg of args) {
      const qualifiers = [arg.type];
      if (withRequired) qualifiers.push(arg.required ? 'required' : 'optional');
      if (arg.enum_values) qualifiers.push(`one of ${arg.enum_values.join(', ')}`);
      list.appendChild(
        el('li', undefined, `${arg.name} (${qualifiers.join('; ')}) ${arg.meaning}`),
      );
    }
    if (args.length === 0) list.appendChild(el('li', 'empty', '(none)'));
    root.appendChild(list);
  };
  renderArgs('inputs', spec.inputs, true);
  renderArgs('outputs', spec.outputs, false);

  const tryButton = el('button', 'try-example', 'try an example');
  tryButton.type = 'button';
  tryButton.dataset.role = 'try-example';
  tryButton.addEventListener('click', () => onTryExample(exampleQueryFor(spec)));
  root.appendChild(tryButton);
  return root;
}
