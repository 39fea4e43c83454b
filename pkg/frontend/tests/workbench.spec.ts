// End-to-end specs: a real menucraft server (scripted provider) behind the
// DOM. Covers the replay scenario: load a session, insert the TopicDesign
// template, submit, watch the 3-tab preview, then drive the hotkey-collision
// exchange until the violation banner appears and clears.
import { afterAll, beforeAll, beforeEach, describe, expect, test } from 'vitest';

import { Workbench } from '../src/app.js';
import { fixturePath, startServer, waitFor, type TestServer } from './server.js';

const CREATE_PROMPT = 'Create a menu for a text editor';
const HOTKEY_PROMPT = 'Great! Now add keyboard shortcuts for each command.';
const PROSE_PROMPT = 'prose only please';

let server: TestServer;
let scenarioSessionId: string | null = null;

function mount(repairRounds: number): Workbench {
  const host = document.createElement('div');
  document.body.append(host);
  return new Workbench(host, { origin: server.origin, repairRounds });
}

function addUniqueHotkeysConstraint(app: Workbench): void {
  const select = document.querySelector<HTMLSelectElement>('.constraint-type')!;
  select.value = 'UniqueHotkeys';
  select.dispatchEvent(new Event('change'));
  document.querySelector<HTMLButtonElement>('[data-testid="add-constraint"]')!.click();
  expect(app.constraints.isDirty()).toBe(true);
}

function feedTexts(role: string): string[] {
  return Array.from(document.querySelectorAll(`.msg.${role}`)).map(
    (node) => node.textContent ?? '',
  );
}

beforeAll(async () => {
  server = await startServer([
    { match: CREATE_PROMPT, reply_file: fixturePath('s4_1_assistant.txt') },
    { match: 'add keyboard shortcuts', reply_file: fixturePath('s4_5_assistant.txt') },
    { match: 'share a same shortcut', reply_file: fixturePath('s4_5_corrected_assistant.txt') },
    { match: PROSE_PROMPT, reply: 'Sure. Tell me more about what the app should do and I will sketch a menu.' },
  ]);
});

afterAll(() => {
  server?.stop();
});

beforeEach(() => {
  document.body.replaceChildren();
});

describe('scripted replay', () => {
  test('template insert, 3-tab preview, banner appears and clears', async () => {
    const started = performance.now();
    const app = mount(0);
    await app.init();

    // palette: six server templates plus FreeForm
    const buttons = document.querySelectorAll('.palette-entry');
    expect(buttons.length).toBe(7);

    addUniqueHotkeysConstraint(app);
    await app.newSession();
    scenarioSessionId = app.sessionId();
    expect(scenarioSessionId).toBeTruthy();
    expect(app.constraints.isDirty()).toBe(false);
    expect(document.querySelector('.constraint[data-type="UniqueHotkeys"]')).toBeTruthy();

    // TopicDesign lands in the composer with only the required slot left
    document.querySelector<HTMLButtonElement>('[data-template="TopicDesign"]')!.click();
    expect(app.composer.text()).toContain('Create a menu for a {{topic}}');
    expect(app.composer.text()).not.toMatch(/tab_count|constraints/);
    const slot = document.querySelector<HTMLElement>('.slot[data-slot="topic"]');
    expect(slot).toBeTruthy();
    expect(app.composer.unfilledSlots()).toEqual(['topic']);

    app.composer.fillSlot('topic', 'text editor application');
    expect(app.composer.unfilledSlots()).toEqual([]);
    await app.sendComposer();

    expect(app.preview.tabNames()).toEqual(['File', 'Edit', 'Format']);
    for (const tab of ['File', 'Edit', 'Format']) {
      expect(
        document.querySelectorAll(`[data-tab="${tab}"] li.command`).length,
      ).toBe(6);
    }
    expect(feedTexts('designer').length).toBe(1);
    expect(feedTexts('assistant').length).toBe(1);
    expect(app.banner.isVisible()).toBe(false);

    // hotkey reply collides on Ctrl+Shift+S; repair_rounds=0 surfaces it
    app.composer.setText(HOTKEY_PROMPT);
    await app.sendComposer();
    expect(app.banner.isVisible()).toBe(true);
    const messages = app.banner.messages();
    expect(messages.length).toBe(1);
    expect(messages[0]).toContain('Ctrl+Shift+S');
    expect(messages[0]).toContain('Save As...');
    expect(messages[0]).toContain('Strikethrough');
    // rejected doc is not session state; the preview still shows the
    // hotkey-less first menu
    expect(app.preview.hotkeyFor('Save As...')).toBeNull();

    // "ask to fix" turns the violation text into the next designer message
    document.querySelector<HTMLButtonElement>('[data-testid="ask-to-fix"]')!.click();
    await waitFor(() => !app.isInFlight() && !app.banner.isVisible(), 15000, 'banner to clear');
    expect(app.preview.hotkeyFor('Strikethrough')).toBe('Ctrl+Shift+D');
    expect(app.preview.hotkeyFor('Save As...')).toBe('Ctrl+Shift+S');
    const designers = feedTexts('designer');
    expect(designers.length).toBe(3);
    expect(designers[2]).toContain('share a same shortcut');
    expect(feedTexts('assistant').length).toBe(3);

    const elapsed = (performance.now() - started) / 1000;
    const verdict = elapsed < 30 ? 'PASS' : 'FAIL';
    console.log(
      `[${verdict}] ui replay: TopicDesign insert, 3-tab preview, banner appears and clears (${elapsed.toFixed(2)}s, budget 30s)`,
    );
    expect(elapsed).toBeLessThan(30);
  });

  test('prose-only reply goes to the feed and leaves the preview alone', async () => {
    expect(scenarioSessionId).toBeTruthy();
    const app = mount(0);
    await app.init();
    await app.loadSession(scenarioSessionId!);
    const before = app.feed.messageCount();

    app.composer.setText(PROSE_PROMPT);
    await app.sendComposer();

    expect(app.feed.messageCount()).toBe(before + 2);
    const assistants = feedTexts('assistant');
    expect(assistants[assistants.length - 1]).toContain('Tell me more');
    expect(app.preview.hotkeyFor('Strikethrough')).toBe('Ctrl+Shift+D');
    expect(app.banner.isVisible()).toBe(false);
  });

  test('server-side repair shows the corrective turn and corrected reply', async () => {
    const app = mount(2);
    await app.init();
    addUniqueHotkeysConstraint(app);
    await app.newSession();

    app.composer.setText(HOTKEY_PROMPT);
    await app.sendComposer();

    // repaired within the turn: no banner, corrected doc, linear history
    expect(app.banner.isVisible()).toBe(false);
    expect(app.preview.hotkeyFor('Strikethrough')).toBe('Ctrl+Shift+D');
    const designers = feedTexts('designer');
    expect(designers.length).toBe(2);
    expect(designers[1]).toContain('share a same shortcut');
    expect(feedTexts('assistant').length).toBe(2);
  });

  test('auto-fix hotkeys reassigns the collision through the server', async () => {
    const app = mount(0);
    await app.init();
    addUniqueHotkeysConstraint(app);
    await app.newSession();

    app.composer.setText(HOTKEY_PROMPT);
    await app.sendComposer();
    expect(app.banner.isVisible()).toBe(true);

    document.querySelector<HTMLButtonElement>('[data-testid="auto-fix-hotkeys"]')!.click();
    await waitFor(() => !app.banner.isVisible(), 15000, 'auto-fix to clear the banner');
    expect(document.querySelector('[data-testid="preview-note"]')).toBeTruthy();
    const saveAs = app.preview.hotkeyFor('Save As...');
    const strikethrough = app.preview.hotkeyFor('Strikethrough');
    expect(saveAs).toBe('Ctrl+Shift+S');
    expect(strikethrough).toBeTruthy();
    expect(strikethrough).not.toBe('Ctrl+Shift+S');
  });

  test('unscripted prompt surfaces the provider detail as a 502', async () => {
    expect(scenarioSessionId).toBeTruthy();
    const app = mount(0);
    await app.init();
    await app.loadSession(scenarioSessionId!);
    const before = app.feed.messageCount();

    app.composer.setText('this text matches no script entry at all');
    await app.sendComposer();

    const error = document.querySelector<HTMLElement>('[data-testid="error"]')!;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain('provider error');
    expect(error.textContent).toContain('script exhausted');
    // the designer message still reached the transcript before the failure
    expect(app.feed.messageCount()).toBe(before + 1);
  });

  test('reload restores feed and preview from the session endpoint', async () => {
    expect(scenarioSessionId).toBeTruthy();
    const app = mount(0);
    await app.init();

    const picker = document.querySelector<HTMLSelectElement>('[data-testid="session-picker"]')!;
    expect(picker.options.length).toBeGreaterThan(2);
    expect(
      Array.from(picker.options).some((o) => o.value === scenarioSessionId),
    ).toBe(true);

    await app.loadSession(scenarioSessionId!);
    expect(app.feed.messageCount()).toBeGreaterThanOrEqual(8);
    expect(app.preview.tabNames()).toEqual(['File', 'Edit', 'Format']);
    expect(app.preview.hotkeyFor('Strikethrough')).toBe('Ctrl+Shift+D');
    expect(document.querySelector('.constraint[data-type="UniqueHotkeys"]')).toBeTruthy();
    expect(app.banner.isVisible()).toBe(false);
  });
});
