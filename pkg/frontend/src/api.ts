// Typed client for the menucraft HTTP API. All state lives server-side;
// this module only moves JSON and surfaces the server's error envelope.

export interface CommandItem {
  kind: 'command';
  name: string;
  hotkey: string | null;
  frequency: number | null;
  elaboration: string | null;
}

export interface GroupItem {
  kind: 'group';
  name: string;
  items: MenuItem[];
}

export type MenuItem = CommandItem | GroupItem;

export interface MenuTab {
  name: string;
  items: MenuItem[];
}

export interface MenuDocument {
  app_topic: string;
  tabs: MenuTab[];
}

export interface ConstraintObj {
  type: string;
  [field: string]: unknown;
}

export interface ViolationObj {
  constraint: ConstraintObj;
  paths: string[];
  message: string;
  severity: string;
}

export interface MessageObj {
  role: 'system' | 'designer' | 'assistant';
  text: string;
}

export interface SessionData {
  id: string;
  created: number;
  updated: number;
  repair_rounds: number;
  constraints: ConstraintObj[];
  transcript: MessageObj[];
  current_doc: MenuDocument | null;
}

export interface SessionSummary {
  id: string;
  created: number;
  updated: number;
  turns: number;
  has_doc: boolean;
  constraints: number;
}

export type ReplyObj =
  | { type: 'menu'; doc: MenuDocument; prose_before: string; prose_after: string; warnings: string[] }
  | { type: 'suggestions'; entries: [string, string][] }
  | { type: 'names'; names: string[] }
  | { type: 'prose'; text: string };

export interface TurnResult {
  reply: ReplyObj;
  doc: MenuDocument | null;
  violations: ViolationObj[];
  rounds_used: number;
  repaired: boolean;
  error: string | null;
}

export interface TemplateSlot {
  name: string;
  required: boolean;
  description: string;
}

export interface TemplateEntry {
  kind: string;
  template: string;
  slots: TemplateSlot[];
}

export interface MessageBody {
  kind: string;
  free_text?: string;
  topic?: string;
  commands?: string[];
  tabs?: string[];
  seed?: number;
  constraints?: ConstraintObj[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly providerKind?: string,
  ) {
    super(message);
  }
}

async function asApiError(res: Response): Promise<ApiError> {
  let code = 'http_error';
  let message = `${res.status} ${res.statusText}`;
  let providerKind: string | undefined;
  try {
    const body = await res.json();
    if (body && typeof body.error === 'object') {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
      providerKind = body.error.provider_kind;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(res.status, code, message, providerKind);
}

export class MenuCraftClient {
  constructor(readonly origin: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.origin + path, {
        method,
        headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (exc) {
      throw new ApiError(0, 'unreachable', `cannot reach ${this.origin}: ${exc}`);
    }
    if (!res.ok) throw await asApiError(res);
    return (await res.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('GET', '/health');
  }

  createSession(body: {
    constraints?: ConstraintObj[];
    repair_rounds?: number;
  } = {}): Promise<{ id: string }> {
    return this.request('POST', '/sessions', body);
  }

  listSessions(): Promise<{ sessions: SessionSummary[] }> {
    return this.request('GET', '/sessions');
  }

  getSession(id: string): Promise<SessionData> {
    return this.request('GET', `/sessions/${id}`);
  }

  postMessage(id: string, body: MessageBody): Promise<TurnResult> {
    return this.request('POST', `/sessions/${id}/messages`, body);
  }

  validate(doc: MenuDocument, constraints: ConstraintObj[]): Promise<{ violations: ViolationObj[] }> {
    return this.request('POST', '/validate', { doc, constraints });
  }

  fixHotkeys(doc: MenuDocument): Promise<MenuDocument> {
    return this.request('POST', '/hotkeys', { doc });
  }

  templates(): Promise<{ templates: TemplateEntry[] }> {
    return this.request('GET', '/templates');
  }
}
