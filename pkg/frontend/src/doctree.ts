import type { MenuDocument, MenuItem } from './api.js';

// The hotkey assigner trusts every preset it is given, duplicates included,
// so a doc with colliding hotkeys would come back unchanged. Before asking
// the server to reassign, drop the hotkey from every later holder of a
// repeated chord; the first holder keeps it.
export function stripDuplicateHotkeys(doc: MenuDocument): MenuDocument {
  const seen = new Set<string>();

  function walk(item: MenuItem): MenuItem {
    if (item.kind === 'group') {
      return { ...item, items: item.items.map(walk) };
    }
    if (item.hotkey === null) return item;
    if (seen.has(item.hotkey)) {
      return { ...item, hotkey: null };
    }
    seen.add(item.hotkey);
    return item;
  }

  return {
    app_topic: doc.app_topic,
    tabs: doc.tabs.map((tab) => ({ name: tab.name, items: tab.items.map(walk) })),
  };
}
