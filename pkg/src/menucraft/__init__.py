"""MenuCraft: an AI-assisted menu design workbench.

The engine couples a chat-driven design dialogue (prompt templates, lenient
reply parsing, constraint validation with automatic corrective turns) with a
deterministic baseline optimizer for frequency/associativity menu layout.
"""

from menucraft.model import (
    Command,
    CommandPath,
    Group,
    Hotkey,
    MenuDocument,
    Tab,
    deserialize,
    leaf_commands,
    parse_hotkey,
    serialize,
)

__version__ = "0.1.0"

__all__ = [
    "Command",
    "CommandPath",
    "Group",
    "Hotkey",
    "MenuDocument",
    "Tab",
    "deserialize",
    "leaf_commands",
    "parse_hotkey",
    "serialize",
    "__version__",
]
