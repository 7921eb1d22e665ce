import { ApiClient, ApiError } from './api.js';
import { renderApiPanel, renderCatalogList, renderTurn } from './render.js';
import { Action, SessionState, Turn, TurnOutcome, initialState, reduce } from './state.js';
import { Command } from './types.js';

// The app instance owns the session state and re-renders into a fixed DOM
// skeleton; construction wires the skeleton into the given root element so
// tests can drive it inside jsdom exactly as the browser does.

const SKELETON = `
  <div class="banner" data-role="banner" hidden>
    <span data-role="banner-text"></span>
    <button type="button" data-role="banner-retry">retry</button>
  </div>
  <main>
    <section class="conversation" data-role="conversation"></section>
    <form data-role="query-form">
      <input type="text" data-role="query-input" placeholder="ask about the data" />
      <button type="submit" data-role="submit">ask</button>
    </form>
  </main>
  <aside>
    <div data-role="catalog-pane"></div>
    <div data-role="api-pane"></div>
  </aside>
`;

export class App {
  state: SessionState = initialState();
  private lastQuery = '';

  private conversation: HTMLElement;
  private input: HTMLInputElement;
  private submitButton: HTMLButtonElement;
  private banner: HTMLElement;
  private bannerText: HTMLElement;
  private catalogPane: HTMLElement;
  private apiPane: HTMLElement;

  constructor(private root: HTMLElement, private client: ApiClient) {
    root.innerHTML = SKELETON;
    const grab = <T extends HTMLElement>(role: string): T => {
      const node = root.querySelector(`[data-role="${role}"]`);
      if (!node) throw new Error(`missing skeleton node ${role}`);
      return node as T;
    };
    this.conversation = grab('conversation');
    this.input = grab<HTMLInputElement>('query-input');
    this.submitButton = grab<HTMLButtonElement>('submit');
    this.banner = grab('banner');
    this.bannerText = grab('banner-text');
    this.catalogPane = grab('catalog-pane');
    this.apiPane = grab('api-pane');

    grab<HTMLFormElement>('query-form').addEventListener('submit', (event) => {
      event.preventDefault();
      void this.submit();
    });
    this.input.addEventListener('input', () => {
      this.state = reduce(this.state, { type: 'draft', text: this.input.value });
    });
    grab('banner-retry').addEventListener('click', () => void this.submit());
  }

  dispatch(action: Action): void {
    this.state = reduce(this.state, action);
    this.render();
  }

  async loadCatalog(): Promise<void> {
    try {
      const listing = await this.client.catalog();
      this.catalogPane.replaceChildren(
        renderCatalogList(listing.apis, (apiId) => void this.showApi(apiId)),
      );
    } catch (error) {
      this.catalogPane.replaceChildren(
        Object.assign(document.createElement('p'), {
          className: 'empty',
          textContent: `catalog unavailable: ${describe(error)}`,
        }),
      );
    }
  }

  async showApi(apiId: string): Promise<void> {
    const spec = await this.client.apiSpec(apiId);
    this.apiPane.replaceChildren(
      renderApiPanel(spec, (query) => {
        this.input.value = query;
        this.dispatch({ type: 'draft', text: query });
        this.input.focus();
      }),
    );
  }

  async submit(): Promise<void> {
    const query = this.input.value.trim();
    if (!query || this.state.pending) return;
    this.dispatch({ type: 'draft', text: this.input.value });
    this.dispatch({ type: 'submit' });
    this.lastQuery = query;
    try {
      const outcome = await this.client.query(query);
      this.dispatch({ type: 'outcome', query, outcome });
    } catch (error) {
      this.dispatch({ type: 'network-error', message: describe(error) });
    }
  }

  /** what-if path: validate-and-execute an edited command as a manual turn */
  async executeEdit(turn: Turn, commandText: string): Promise<void> {
    let command: Command;
    try {
      command = JSON.parse(commandText) as Command;
    } catch (error) {
      this.dispatch({ type: 'network-error', message: `not valid JSON: ${describe(error)}` });
      return;
    }
    try {
      const result = await this.client.execute(command);
      let outcome: TurnOutcome;
      if (result.violations) {
        outcome = {
          kind: 'failed',
          error: 'command rejected',
          command,
          violations: result.violations,
        };
      } else {
        outcome = {
          kind: 'answered',
          command: result.command,
          table: result.table,
          canonical: result.canonical,
        };
      }
      this.dispatch({ type: 'outcome', query: turn.query, outcome, manual: true });
    } catch (error) {
      this.dispatch({ type: 'network-error', message: describe(error) });
    }
  }

  render(): void {
    this.conversation.replaceChildren(
      ...this.state.turns.map((turn) =>
        renderTurn(turn, {
          onExecuteEdit: (t, text) => void this.executeEdit(t, text),
        }),
      ),
    );
    this.submitButton.disabled = this.state.pending;
    this.input.value = this.state.draft;
    if (this.state.banner) {
      this.banner.hidden = false;
      this.bannerText.textContent = this.state.banner;
    } else {
      this.banner.hidden = true;
    }
    if (!this.state.pending) this.input.focus();
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `HTTP ${error.status}: ${error.message}`;
  if (error instanceof Error) return error.message;
  return String(error);
}

export function bootstrap(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const base = new URLSearchParams(window.location.search).get('api') ?? '';
  const app = new App(root, new ApiClient(base));
  void app.loadCatalog();
  app.render();
}
