import type {
  CheckRequest,
  CheckResponse,
  CompletionItemJson,
  ParseResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

async function post<T>(url: string, body: unknown): Promise<T> {
  const resp = await fetch(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const payload = await resp.json();
      detail = typeof payload.detail === "string" ? payload.detail : JSON.stringify(payload.detail);
    } catch {
      // keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

/** What the workbench needs from the service; Client is the real thing. */
export interface Api {
  parse(text: string): Promise<ParseResponse>;
  complete(text: string, byteOffset: number): Promise<CompletionItemJson[]>;
  check(req: CheckRequest): Promise<CheckResponse>;
  health(): Promise<boolean>;
}

export class Client implements Api {
  constructor(private base: string = "") {}

  parse(text: string): Promise<ParseResponse> {
    return post(`${this.base}/api/parse`, { text });
  }

  async complete(text: string, byteOffset: number): Promise<CompletionItemJson[]> {
    const data = await post<{ items: CompletionItemJson[] }>(`${this.base}/api/complete`, {
      text,
      offset: byteOffset,
    });
    return data.items;
  }

  check(req: CheckRequest): Promise<CheckResponse> {
    return post(`${this.base}/api/check`, req);
  }

  async health(): Promise<boolean> {
    try {
      const resp = await fetch(`${this.base}/api/health`);
      return resp.ok;
    } catch {
      return false;
    }
  }
}
