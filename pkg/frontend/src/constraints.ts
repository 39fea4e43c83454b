import { el } from './dom.js';
import type { ConstraintObj } from './api.js';

const TYPES = [
  'MaxCommandsPerTab',
  'ExactTabCount',
  'RequiredTabs',
  'RequiredPlacement',
  'UniqueHotkeys',
  'UniqueCommandNames',
  'ForbiddenHotkeys',
] as const;

const HINTS: Record<string, string> = {
  MaxCommandsPerTab: 'limit, e.g. 6',
  ExactTabCount: 'tab count, e.g. 3',
  RequiredTabs: 'tab names, comma-separated',
  RequiredPlacement: 'command, tab',
  UniqueHotkeys: 'no arguments',
  UniqueCommandNames: 'global or per_tab',
  ForbiddenHotkeys: 'shortcuts, comma-separated',
};

function splitList(text: string): string[] {
  return text.split(',').map((part) => part.trim()).filter((part) => part !== '');
}

export function parseConstraintInput(type: string, text: string): ConstraintObj | null {
  const trimmed = text.trim();
  switch (type) {
    case 'MaxCommandsPerTab': {
      const limit = Number(trimmed);
      return Number.isInteger(limit) && limit >= 1 ? { type, limit } : null;
    }
    case 'ExactTabCount': {
      const n = Number(trimmed);
      return Number.isInteger(n) && n >= 1 ? { type, n } : null;
    }
    case 'RequiredTabs': {
      const names = splitList(trimmed);
      return names.length ? { type, names } : null;
    }
    case 'RequiredPlacement': {
      const parts = splitList(trimmed);
      return parts.length === 2 ? { type, command: parts[0], tab: parts[1] } : null;
    }
    case 'UniqueHotkeys':
      return { type };
    case 'UniqueCommandNames': {
      const scope = trimmed === '' ? 'global' : trimmed;
      return scope === 'global' || scope === 'per_tab' ? { type, scope } : null;
    }
    case 'ForbiddenHotkeys': {
      const hotkeys = splitList(trimmed);
      return hotkeys.length ? { type, hotkeys } : null;
    }
    default:
      return null;
  }
}

export function describeConstraint(c: ConstraintObj): string {
  switch (c.type) {
    case 'MaxCommandsPerTab':
      return `MaxCommandsPerTab: ${c.limit}`;
    case 'ExactTabCount':
      return `ExactTabCount: ${c.n}`;
    case 'RequiredTabs':
      return `RequiredTabs: ${(c.names as string[]).join(', ')}`;
    case 'RequiredPlacement':
      return `RequiredPlacement: ${c.command} in ${c.tab}`;
    case 'UniqueCommandNames':
      return `UniqueCommandNames (${c.scope})`;
    case 'ForbiddenHotkeys':
      return `ForbiddenHotkeys: ${(c.hotkeys as string[]).join(', ')}`;
    default:
      return c.type;
  }
}

// Constraint list for the session. Edits are staged here and ride along with
// the next message (the API applies constraints through session creation and
// message posts, never as a standalone write).
export class ConstraintEditor {
  readonly element: HTMLDivElement;
  private readonly list: HTMLUListElement;
  private readonly pendingNote: HTMLSpanElement;
  private readonly argInput: HTMLInputElement;
  private readonly typeSelect: HTMLSelectElement;
  private constraints: ConstraintObj[] = [];
  private dirty = false;

  constructor() {
    this.list = el('ul', { class: 'constraint-list' });
    this.pendingNote = el('span', {
      class: 'pending-note',
      'data-testid': 'constraints-pending',
      hidden: '',
    }, ['applies with your next message']);
    this.typeSelect = el('select', { class: 'constraint-type' });
    for (const type of TYPES) {
      this.typeSelect.append(el('option', { value: type }, [type]));
    }
    this.argInput = el('input', { class: 'constraint-args', placeholder: HINTS[TYPES[0]] });
    this.typeSelect.addEventListener('change', () => {
      this.argInput.placeholder = HINTS[this.typeSelect.value] ?? '';
    });
    const add = el('button', { type: 'button', 'data-testid': 'add-constraint' }, ['add']);
    add.addEventListener('click', () => this.addFromInputs());
    this.element = el('div', { class: 'constraints', 'data-testid': 'constraints' }, [
      el('h3', {}, ['Constraints ', this.pendingNote]),
      this.list,
      el('div', { class: 'constraint-add' }, [this.typeSelect, this.argInput, add]),
    ]);
    this.renderList();
  }

  // Server-confirmed constraints (session load, or after a turn applied them).
  sync(constraints: ConstraintObj[]): void {
    this.constraints = constraints.slice();
    this.dirty = false;
    this.renderList();
  }

  current(): ConstraintObj[] {
    return this.constraints.slice();
  }

  isDirty(): boolean {
    return this.dirty;
  }

  markApplied(): void {
    this.dirty = false;
    this.pendingNote.hidden = true;
  }

  private addFromInputs(): void {
    const parsed = parseConstraintInput(this.typeSelect.value, this.argInput.value);
    this.argInput.classList.toggle('invalid', parsed === null);
    if (!parsed) return;
    this.constraints.push(parsed);
    this.argInput.value = '';
    this.touch();
  }

  private touch(): void {
    this.dirty = true;
    this.renderList();
  }

  private renderList(): void {
    this.list.replaceChildren();
    this.pendingNote.hidden = !this.dirty;
    this.constraints.forEach((constraint, index) => {
      const remove = el('button', { type: 'button', class: 'constraint-remove' }, ['remove']);
      remove.addEventListener('click', () => {
        this.constraints.splice(index, 1);
        this.touch();
      });
      this.list.append(
        el('li', { class: 'constraint', 'data-type': constraint.type }, [
          el('span', {}, [describeConstraint(constraint)]),
          remove,
        ]),
      );
    });
    if (!this.constraints.length) {
      this.list.append(el('li', { class: 'constraint-none' }, ['none']));
    }
  }
}
