import {
  ApiSpec,
  CatalogListing,
  Command,
  ExecuteResult,
  Outcome,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === 'string') detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

/** Thin typed client for the nl2api HTTP service. */
export class ApiClient {
  constructor(private base: string = '') {}

  private url(path: string): string {
    return this.base.replace(/\/$/, '') + path;
  }

  async query(query: string): Promise<Outcome & { canonical?: string }> {
    const response = await fetch(this.url('/query?trace=1'), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ query }),
    });
    return asJson(response);
  }

  async execute(command: Command): Promise<ExecuteResult & { canonical?: string }> {
    const response = await fetch(this.url('/execute'), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ command }),
    });
    return asJson(response);
  }

  async catalog(): Promise<CatalogListing> {
    return asJson(await fetch(this.url('/catalog')));
  }

  async apiSpec(apiId: string): Promise<ApiSpec> {
    return asJson(await fetch(this.url('/catalog/' + encodeURIComponent(apiId))));
  }
}
