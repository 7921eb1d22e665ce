/**
 * End-to-end UI flow against a live nl2api service on the desk fixtures:
 * the real App drives the real DOM (jsdom) and real HTTP, covering the
 * query -> answer, vague -> clarify -> rephrase, and command-edit paths.
 */

import { ChildProcess, spawn } from 'node:child_process';
import { fileURLToPath } from 'node:url';
import path from 'node:path';

import { afterAll, beforeAll, describe, expect, it, vi } from 'vitest';

import { ApiClient } from '../src/api.js';
import { App } from '../src/app.js';

const PORT = 8841;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), '..', '..');

const FIG2_QUERY = "What’s Company XXX’s net profit for 2020?";
const VAGUE_QUERY = 'Tell me some information';

let service: ChildProcess;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 150; attempt++) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error('service did not come up');
}

beforeAll(async () => {
  service = spawn(
    'python3',
    [
      '-m',
      'nl2api.cli',
      'serve',
      '--config',
      path.join(REPO_ROOT, 'fixtures', 'desk', 'config.rule'),
      '--port',
      String(PORT),
    ],
    { cwd: REPO_ROOT, stdio: 'ignore' },
  );
  await waitForService();
});

afterAll(() => {
  service?.kill();
});

function makeApp(): App {
  document.body.innerHTML = '<div id="root"></div>';
  const app = new App(document.getElementById('root')!, new ApiClient(BASE));
  app.render();
  return app;
}

function input(app: App): HTMLInputElement {
  return document.querySelector('[data-role="query-input"]')!;
}

describe('console against a live service', () => {
  it('answers the seeded financial query with a result table', async () => {
    const app = makeApp();
    input(app).value = FIG2_QUERY;
    input(app).dispatchEvent(new Event('input'));
    await app.submit();

    const turn = document.querySelector('[data-role="turn"]')!;
    expect(turn.querySelector('[data-role="api-badge"]')?.textContent).toBe('FIN001');
    const table = turn.querySelector('[data-role="result-table"]')!;
    expect(table.textContent).toContain('net_profit');
    expect(table.textContent).toContain('1234.5');
    const canonical = turn.querySelector('[data-role="canonical-command"]')!;
    expect(canonical.textContent).toBe(
      '{"api_id":"FIN001","inputs":{"company_name":"Company XXX","year":2020},"info":["net_profit"]}',
    );
    expect(turn.querySelectorAll('[data-role="trace"] li').length).toBeGreaterThanOrEqual(3);
    expect(input(app).value).toBe(''); // answered clears the draft
  });

  it('renders the clarification for a vague query and keeps the draft', async () => {
    const app = makeApp();
    input(app).value = VAGUE_QUERY;
    input(app).dispatchEvent(new Event('input'));
    await app.submit();

    const bubble = document.querySelector('[data-role="clarification"]')!;
    expect(bubble.textContent).toContain('Please provide specific details');
    expect(input(app).value).toBe(VAGUE_QUERY); // retained for rephrasing

    // rephrasing the retained draft resolves on the second try
    input(app).value = FIG2_QUERY;
    input(app).dispatchEvent(new Event('input'));
    await app.submit();
    expect(document.querySelectorAll('[data-role="turn"]')).toHaveLength(2);
    expect(document.querySelector('[data-role="result-table"]')).not.toBeNull();
  });

  it('re-executes an edited command as a manual turn', async () => {
    const app = makeApp();
    input(app).value = FIG2_QUERY;
    input(app).dispatchEvent(new Event('input'));
    await app.submit();

    const textarea = document.querySelector<HTMLTextAreaElement>(
      '[data-role="what-if"] textarea',
    )!;
    textarea.value = textarea.value.replace('2020', '2019');
    document.querySelector<HTMLButtonElement>('[data-role="what-if"] button')!.click();

    await vi.waitFor(() => {
      expect(document.querySelectorAll('[data-role="turn"]')).toHaveLength(2);
    });
    const manualTurn = document.querySelectorAll('[data-role="turn"]')[1];
    expect(manualTurn.querySelector('[data-role="manual-badge"]')).not.toBeNull();
    expect(manualTurn.querySelector('[data-role="result-table"]')?.textContent).toContain('987.6');
  });

  it('renders violations inline for a bad edit', async () => {
    const app = makeApp();
    input(app).value = FIG2_QUERY;
    input(app).dispatchEvent(new Event('input'));
    await app.submit();

    const textarea = document.querySelector<HTMLTextAreaElement>(
      '[data-role="what-if"] textarea',
    )!;
    textarea.value = textarea.value.replace('net_profit', 'no_such_output');
    document.querySelector<HTMLButtonElement>('[data-role="what-if"] button')!.click();

    await vi.waitFor(() => {
      expect(document.querySelector('[data-role="violations"]')).not.toBeNull();
    });
    expect(document.querySelector('[data-role="violations"]')?.textContent).toContain(
      'UNKNOWN_OUTPUT',
    );
  });

  it('browses the catalog and prefills an example query', async () => {
    const app = makeApp();
    await app.loadCatalog();
    const buttons = document.querySelectorAll<HTMLButtonElement>(
      '[data-role="catalog-list"] button',
    );
    expect(buttons).toHaveLength(2);
    await app.showApi('FIN001');
    const panel = document.querySelector('[data-role="api-panel"]')!;
    expect(panel.textContent).toContain('company_name');
    panel.querySelector<HTMLButtonElement>('[data-role="try-example"]')!.click();
    expect(input(app).value).toContain('operating income'); // FIN001's first output
  });

  it('shows an error banner when the service is unreachable', async () => {
    document.body.innerHTML = '<div id="root"></div>';
    const app = new App(
      document.getElementById('root')!,
      new ApiClient('http://127.0.0.1:59999'),
    );
    app.render();
    input(app).value = FIG2_QUERY;
    input(app).dispatchEvent(new Event('input'));
    await app.submit();
    const banner = document.querySelector<HTMLElement>('[data-role="banner"]')!;
    expect(banner.hidden).toBe(false);
    expect(document.querySelectorAll('[data-role="turn"]')).toHaveLength(0);
  });
});
