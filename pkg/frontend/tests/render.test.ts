import { describe, expect, it, vi } from 'vitest';

import {
  exampleQueryFor,
  renderApiPanel,
  renderCatalogList,
  renderTable,
  renderTurn,
  renderViolations,
} from '../src/render.js';
import { Turn } from '../src/state.js';
import { ApiSpec } from '../src/types.js';

const CANONICAL =
  '{"api_id":"FIN001","inputs":{"company_name":"Company XXX","year":2020},"info":["net_profit"]}';

function answeredTurn(): Turn {
  return {
    id: 1,
    query: 'net profit?',
    manual: false,
    timestamp: 0,
    outcome: {
      kind: 'answered',
      command: {
        api_id: 'FIN001',
        inputs: { company_name: 'Company XXX', year: 2020 },
        info: ['net_profit'],
      },
      canonical: CANONICAL,
      table: { columns: ['net_profit'], rows: [[1234.5]] },
      trace: [
        { stage: 'route', prompt_digest: 'abc', raw_output: 'FIN001', duration_ms: 1 },
        { stage: 'command', prompt_digest: 'def', raw_output: CANONICAL, duration_ms: 1 },
        { stage: 'execute', prompt_digest: '', raw_output: 'rows=1', duration_ms: 1 },
      ],
    },
  };
}

describe('renderTable', () => {
  it('renders header and cells', () => {
    const table = renderTable({ columns: ['a', 'b'], rows: [[1, 'x'], [2.5, 'y']] });
    expect(table.querySelectorAll('th')).toHaveLength(2);
    const cells = [...table.querySelectorAll('td')].map((td) => td.textContent);
    expect(cells).toEqual(['1', 'x', '2.5', 'y']);
  });

  it('shows an empty marker for zero rows', () => {
    const table = renderTable({ columns: ['a'], rows: [] });
    expect(table.textContent).toContain('(no rows)');
  });
});

describe('renderTurn', () => {
  it('renders the canonical command byte-equal to the wire form', () => {
    const element = renderTurn(answeredTurn());
    const canonical = element.querySelector('[data-role="canonical-command"]');
    expect(canonical?.textContent).toBe(CANONICAL);
  });

  it('shows the api badge, table and collapsible trace', () => {
    const element = renderTurn(answeredTurn());
    expect(element.querySelector('[data-role="api-badge"]')?.textContent).toBe('FIN001');
    expect(element.querySelector('[data-role="result-table"]')?.textContent).toContain('1234.5');
    const trace = element.querySelector('details[data-role="trace"]');
    expect(trace?.querySelectorAll('li')).toHaveLength(3);
    expect(element.querySelector('[data-role="pretty-command"]')?.textContent).toContain(
      '"api_id": "FIN001"',
    );
  });

  it('offers command editing only when a handler is given', () => {
    const withEditor = renderTurn(answeredTurn(), { onExecuteEdit: () => undefined });
    expect(withEditor.querySelector('[data-role="what-if"] textarea')).not.toBeNull();
    const withoutEditor = renderTurn(answeredTurn());
    expect(withoutEditor.querySelector('[data-role="what-if"]')).toBeNull();
  });

  it('edit button passes the edited text through', () => {
    const onExecuteEdit = vi.fn();
    const element = renderTurn(answeredTurn(), { onExecuteEdit });
    const textarea = element.querySelector<HTMLTextAreaElement>('[data-role="what-if"] textarea')!;
    textarea.value = CANONICAL.replace('2020', '2019');
    element.querySelector<HTMLButtonElement>('[data-role="what-if"] button')!.click();
    expect(onExecuteEdit).toHaveBeenCalledOnce();
    expect(onExecuteEdit.mock.calls[0][1]).toContain('2019');
  });

  it('clarify turns render the clarification text and no editor', () => {
    const turn: Turn = {
      id: 2,
      query: 'tell me stuff',
      manual: false,
      timestamp: 0,
      outcome: { kind: 'clarify', clarification: 'please provide details' },
    };
    const element = renderTurn(turn, { onExecuteEdit: () => undefined });
    expect(element.querySelector('[data-role="clarification"]')?.textContent).toBe(
      'please provide details',
    );
    expect(element.querySelector('[data-role="what-if"]')).toBeNull();
  });

  it('failed turns render the diagnostic and inline violations', () => {
    const turn: Turn = {
      id: 3,
      query: 'q',
      manual: true,
      timestamp: 0,
      outcome: {
        kind: 'failed',
        error: 'command rejected',
        violations: [{ code: 'UNKNOWN_OUTPUT', path: 'info[0]', message: 'no such output' }],
      },
    };
    const element = renderTurn(turn);
    expect(element.querySelector('[data-role="failure"]')?.textContent).toContain('rejected');
    expect(element.querySelector('[data-role="violations"]')?.textContent).toContain(
      'UNKNOWN_OUTPUT',
    );
    expect(element.querySelector('[data-role="manual-badge"]')).not.toBeNull();
  });
});

describe('catalog rendering', () => {
  const spec: ApiSpec = {
    api_id: 'FIN001',
    display_name: 'key domestic indicators',
    description: 'financial indicators',
    aliases: [],
    inputs: [
      { name: 'company_name', type: 'text', required: true, meaning: 'company' },
      { name: 'year', type: 'integer', required: true, meaning: 'fiscal year' },
    ],
    outputs: [{ name: 'net_profit', type: 'decimal', meaning: 'net profit' }],
  };

  it('lists apis and reports empty catalogs', () => {
    const onSelect = vi.fn();
    const list = renderCatalogList(
      [{ api_id: 'FIN001', display_name: 'key domestic indicators' }],
      onSelect,
    );
    list.querySelector('button')!.click();
    expect(onSelect).toHaveBeenCalledWith('FIN001');
    const empty = renderCatalogList([], onSelect);
    expect(empty.textContent).toContain('no APIs');
  });

  it('renders the spec panel and prefills an example query', () => {
    const onTryExample = vi.fn();
    const panel = renderApiPanel(spec, onTryExample);
    expect(panel.textContent).toContain('company_name (text; required)');
    expect(panel.textContent).toContain('net_profit');
    panel.querySelector<HTMLButtonElement>('[data-role="try-example"]')!.click();
    expect(onTryExample).toHaveBeenCalledWith(exampleQueryFor(spec));
    expect(exampleQueryFor(spec)).toContain('net profit');
  });

  it('renderViolations lists each violation', () => {
    const box = renderViolations([
      { code: 'A', path: 'p', message: 'm1' },
      { code: 'B', path: 'q', message: 'm2' },
    ]);
    expect(box.querySelectorAll('li')).toHaveLength(2);
  });
});
