import { el } from './dom.js';
import type { MenuDocument, MenuItem } from './api.js';

// Menu tree: tabs down the pane, commands under each tab, groups nested,
// hotkeys pushed to the right edge of the row.
export class PreviewPane {
  readonly element: HTMLElement;

  constructor() {
    this.element = el('aside', { class: 'preview', 'data-testid': 'preview' });
    this.update(null);
  }

  update(doc: MenuDocument | null, note?: string): void {
    this.element.replaceChildren();
    if (note) {
      this.element.append(el('div', { class: 'preview-note', 'data-testid': 'preview-note' }, [note]));
    }
    if (!doc) {
      this.element.append(el('p', { class: 'preview-empty' }, ['No menu yet.']));
      return;
    }
    this.element.append(el('h2', { class: 'preview-topic' }, [doc.app_topic]));
    for (const tab of doc.tabs) {
      const section = el('section', { class: 'tab', 'data-tab': tab.name }, [
        el('h3', {}, [tab.name]),
        this.itemList(tab.items),
      ]);
      this.element.append(section);
    }
  }

  private itemList(items: MenuItem[]): HTMLUListElement {
    const list = el('ul', { class: 'items' });
    for (const item of items) {
      if (item.kind === 'group') {
        list.append(
          el('li', { class: 'group', 'data-item': item.name }, [
            el('span', { class: 'group-name' }, [item.name]),
            this.itemList(item.items),
          ]),
        );
      } else {
        const row = el('li', { class: 'command', 'data-item': item.name }, [
          el('span', { class: 'cmd-name' }, [item.name]),
        ]);
        if (item.hotkey) {
          row.append(el('span', { class: 'hotkey' }, [item.hotkey]));
        }
        list.append(row);
      }
    }
    return list;
  }

  tabNames(): string[] {
    return Array.from(this.element.querySelectorAll<HTMLElement>('.tab')).map(
      (tab) => tab.dataset.tab ?? '',
    );
  }

  hotkeyFor(command: string): string | null {
    for (const row of this.element.querySelectorAll<HTMLElement>('li.command')) {
      if (row.dataset.item === command) {
        return row.querySelector('.hotkey')?.textContent ?? null;
      }
    }
    return null;
  }
}
