import { ApiError, MenuCraftClient } from './api.js';
import type { MenuDocument, SessionData, TemplateEntry, TurnResult, ViolationObj } from './api.js';
import { ViolationBanner } from './banner.js';
import { Composer } from './composer.js';
import { ConstraintEditor } from './constraints.js';
import { stripDuplicateHotkeys } from './doctree.js';
import { el } from './dom.js';
import { Feed } from './feed.js';
import { TemplatePalette } from './palette.js';
import { PreviewPane } from './preview.js';
import { SettingsPane, loadSettings } from './settings.js';
import type { Settings } from './settings.js';

const LOCAL_FIX_NOTE = 'hotkeys reassigned locally; send a message to continue from the session document';

// The workbench: chat on the left, live menu preview on the right. Every
// document and every violation shown here came from the server; after each
// turn the session is refetched so the preview tracks current_doc exactly.
export class Workbench {
  client: MenuCraftClient;
  readonly composer = new Composer();
  readonly feed = new Feed();
  readonly preview = new PreviewPane();
  readonly banner = new ViolationBanner();
  readonly constraints = new ConstraintEditor();
  readonly palette: TemplatePalette;

  private settings: Settings;
  private session: SessionData | null = null;
  private lastResult: TurnResult | null = null;
  private inFlight = false;

  private readonly sendButton: HTMLButtonElement;
  private readonly errorLine: HTMLDivElement;
  private readonly sessionPicker: HTMLSelectElement;
  private readonly settingsPane: SettingsPane;

  constructor(private readonly root: HTMLElement, settings?: Settings) {
    this.settings = settings ?? loadSettings();
    this.client = new MenuCraftClient(this.settings.origin);
    this.palette = new TemplatePalette((entry) => this.insertTemplate(entry));

    this.sendButton = el('button', { type: 'button', 'data-testid': 'send' }, ['send']);
    this.sendButton.addEventListener('click', () => void this.sendComposer());
    this.composer.editor.addEventListener('keydown', (event) => {
      if (event.key === 'Enter' && !event.shiftKey) {
        event.preventDefault();
        void this.sendComposer();
      }
    });

    this.errorLine = el('div', { class: 'error-line', 'data-testid': 'error', hidden: '' });
    this.sessionPicker = el('select', { 'data-testid': 'session-picker' });
    this.sessionPicker.addEventListener('change', () => {
      if (this.sessionPicker.value) void this.loadSession(this.sessionPicker.value);
    });

    const newSession = el('button', { type: 'button', 'data-testid': 'new-session' }, ['new session']);
    newSession.addEventListener('click', () => void this.newSession());
    const settingsToggle = el('button', { type: 'button', 'data-testid': 'toggle-settings' }, ['settings']);
    this.settingsPane = new SettingsPane(this.settings, (next) => this.applySettings(next));
    settingsToggle.addEventListener('click', () => this.settingsPane.toggle());

    this.root.append(
      el('header', { class: 'topbar' }, [
        el('h1', {}, ['menucraft']),
        this.sessionPicker,
        newSession,
        settingsToggle,
      ]),
      this.settingsPane.element,
      this.errorLine,
      this.banner.element,
      el('main', { class: 'split' }, [
        el('section', { class: 'chat' }, [
          this.feed.element,
          this.palette.element,
          this.composer.element,
          this.sendButton,
        ]),
        el('section', { class: 'side' }, [this.preview.element, this.constraints.element]),
      ]),
    );
  }

  async init(): Promise<void> {
    try {
      const [{ templates }] = await Promise.all([this.client.templates(), this.refreshSessions()]);
      this.palette.setEntries(templates);
    } catch (exc) {
      this.showError(this.describeError(exc));
    }
  }

  sessionId(): string | null {
    return this.session?.id ?? null;
  }

  currentSettings(): Settings {
    return this.settings;
  }

  private applySettings(next: Settings): void {
    this.settings = next;
    // A different origin means a different server; drop the loaded session.
    if (next.origin !== this.client.origin) {
      this.client = new MenuCraftClient(next.origin);
      this.session = null;
      this.feed.render([]);
      this.preview.update(null);
      this.banner.clear();
      void this.init();
    }
  }

  private async refreshSessions(): Promise<void> {
    const { sessions } = await this.client.listSessions();
    this.sessionPicker.replaceChildren(el('option', { value: '' }, ['pick a session']));
    for (const summary of sessions) {
      this.sessionPicker.append(
        el('option', { value: summary.id }, [
          `${summary.id.slice(0, 8)} (${summary.turns} messages)`,
        ]),
      );
    }
  }

  async newSession(): Promise<void> {
    this.clearError();
    try {
      const { id } = await this.client.createSession({
        constraints: this.constraints.current(),
        repair_rounds: this.settings.repairRounds,
      });
      this.constraints.markApplied();
      await this.loadSession(id);
      await this.refreshSessions();
      this.sessionPicker.value = id;
    } catch (exc) {
      this.showError(this.describeError(exc));
    }
  }

  async loadSession(id: string): Promise<void> {
    this.clearError();
    try {
      const session = await this.client.getSession(id);
      this.session = session;
      this.lastResult = null;
      this.feed.render(session.transcript);
      this.preview.update(session.current_doc);
      this.constraints.sync(session.constraints);
      this.banner.clear();
    } catch (exc) {
      this.showError(this.describeError(exc));
    }
  }

  insertTemplate(entry: TemplateEntry | null): void {
    if (entry === null) {
      this.composer.clear();
      this.composer.focus();
      return;
    }
    this.composer.insertTemplate(entry);
  }

  async sendComposer(): Promise<void> {
    const missing = this.composer.unfilledSlots();
    if (missing.length) {
      const slots = missing.map((name) => `{{${name}}}`).join(', ');
      this.composer.warn(`fill in ${slots} before sending`);
      return;
    }
    if (this.composer.isEmpty()) {
      this.composer.warn('nothing to send');
      return;
    }
    const sent = await this.submitText(this.composer.text());
    if (sent) this.composer.clear();
  }

  // One designer turn. Returns true when the server accepted it.
  async submitText(text: string): Promise<boolean> {
    if (this.inFlight) return false;
    if (!this.session) {
      this.showError('create or pick a session first');
      return false;
    }
    this.clearError();
    this.setInFlight(true);
    try {
      const body: Parameters<MenuCraftClient['postMessage']>[1] = {
        kind: 'FreeForm',
        free_text: text,
        seed: 0,
      };
      if (this.constraints.isDirty()) {
        body.constraints = this.constraints.current();
      }
      const result = await this.client.postMessage(this.session.id, body);
      this.lastResult = result;
      this.constraints.markApplied();
      await this.refetchSession();
      if (result.violations.length) {
        this.banner.show(result.violations, this.bannerActions());
      } else {
        this.banner.clear();
      }
      return true;
    } catch (exc) {
      this.showError(this.describeError(exc));
      if (exc instanceof ApiError && exc.status === 502) {
        // The failed turn still appended the designer message server-side.
        await this.refetchSession();
      }
      return false;
    } finally {
      this.setInFlight(false);
    }
  }

  private async refetchSession(): Promise<void> {
    if (!this.session) return;
    const session = await this.client.getSession(this.session.id);
    this.session = session;
    this.feed.render(session.transcript);
    this.preview.update(session.current_doc);
    this.constraints.sync(session.constraints);
  }

  private bannerActions() {
    return {
      askToFix: (violation: ViolationObj) => void this.submitText(violation.message),
      autoFixHotkeys: () => void this.autoFixHotkeys(),
    };
  }

  // Reassign shortcuts on the document that carried the violations. The
  // result is shown immediately but is not session state until a turn
  // carries it forward, so the preview is flagged as a local fix.
  async autoFixHotkeys(): Promise<void> {
    const doc = this.lastResult?.doc ?? this.session?.current_doc;
    if (!doc || !this.session) return;
    this.clearError();
    try {
      const fixed = await this.client.fixHotkeys(stripDuplicateHotkeys(doc));
      this.preview.update(fixed, LOCAL_FIX_NOTE);
      const { violations } = await this.client.validate(fixed, this.session.constraints);
      if (violations.length) {
        this.banner.show(violations, this.bannerActions());
      } else {
        this.banner.clear();
      }
    } catch (exc) {
      this.showError(this.describeError(exc));
    }
  }

  private setInFlight(value: boolean): void {
    this.inFlight = value;
    this.sendButton.disabled = value;
    this.composer.setBusy(value);
  }

  isInFlight(): boolean {
    return this.inFlight;
  }

  lastDoc(): MenuDocument | null {
    return this.session?.current_doc ?? null;
  }

  private describeError(exc: unknown): string {
    if (exc instanceof ApiError) {
      if (exc.status === 409) return 'a turn is in flight';
      if (exc.status === 502) {
        const kind = exc.providerKind ? ` (${exc.providerKind})` : '';
        return `provider error${kind}: ${exc.message}`;
      }
      return exc.message;
    }
    return String(exc);
  }

  private showError(message: string): void {
    this.errorLine.textContent = message;
    this.errorLine.hidden = false;
  }

  private clearError(): void {
    this.errorLine.hidden = true;
  }
}
