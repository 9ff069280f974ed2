#!/usr/bin/env python3
"""
Settings Audit Script
Scans the package and tests for settings.* references and compares them with
the fields declared in milnorplan/config.py, including the targets of the
lower-case --config aliases.
"""

import ast
import re
import sys
from pathlib import Path
from typing import Dict, List, Set, Tuple

# Root directory of the project
PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_PATH = PROJECT_ROOT / "milnorplan" / "config.py"


def _config_tree() -> ast.Module:
    return ast.parse(CONFIG_PATH.read_text(encoding="utf-8"))


def extract_declared_settings(tree: ast.Module) -> Set[str]:
    """Annotated class-level fields of the Settings class."""
    declared = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ClassDef) and node.name == "Settings":
            for item in node.body:
                if isinstance(item, ast.AnnAssign) and isinstance(item.target, ast.Name):
                    if item.target.id != "model_config":
                        declared.add(item.target.id)
    return declared


def extract_alias_targets(tree: ast.Module) -> Dict[str, str]:
    """The CONFIG_ALIASES mapping, alias -> settings field."""
    for node in ast.walk(tree):
        if isinstance(node, ast.AnnAssign) and isinstance(node.target, ast.Name):
            if node.target.id == "CONFIG_ALIASES" and isinstance(node.value, ast.Dict):
                return {
                    key.value: value.value
                    for key, value in zip(node.value.keys, node.value.values)
                    if isinstance(key, ast.Constant) and isinstance(value, ast.Constant)
                }
    return {}


def find_settings_usage() -> Dict[str, List[Tuple[str, int]]]:
    """All settings.NAME references under milnorplan/, scripts/ and tests/."""
    pattern = re.compile(r"settings\.([A-Z_][A-Z0-9_]*)")
    used: Dict[str, List[Tuple[str, int]]] = {}

    for dir_name in ("milnorplan", "scripts", "tests"):
        dir_path = PROJECT_ROOT / dir_name
        if not dir_path.exists():
            continue
        for py_file in dir_path.rglob("*.py"):
            if "__pycache__" in py_file.parts:
                continue
            try:
                content = py_file.read_text(encoding="utf-8")
            except OSError as e:
                print(f"Error reading {py_file}: {e}")
                continue
            for line_num, line in enumerate(content.splitlines(), 1):
                for match in pattern.findall(line):
                    used.setdefault(match, []).append((str(py_file.relative_to(PROJECT_ROOT)), line_num))
    return used


def print_report(
    declared: Set[str],
    used: Dict[str, List[Tuple[str, int]]],
    missing: Set[str],
    unused: Set[str],
    broken_aliases: Dict[str, str],
) -> None:
    print("=" * 80)
    print("SETTINGS AUDIT REPORT")
    print("=" * 80)
    print()
    print(f"Declared settings: {len(declared)}")
    print(f"Referenced settings: {len(used)}")
    print(f"Missing in config.py: {len(missing)}")
    print(f"Declared but unused: {len(unused)}")
    print(f"Aliases without a field: {len(broken_aliases)}")

    if missing:
        print("\n" + "-" * 80)
        print("MISSING SETTINGS (AttributeError at runtime):")
        print("-" * 80)
        for name in sorted(missing):
            print(f"\n{name}:")
            for file_path, line_num in used[name][:5]:
                print(f"  - {file_path}:{line_num}")
            if len(used[name]) > 5:
                print(f"  ... and {len(used[name]) - 5} more occurrences")

    if unused:
        print("\n" + "-" * 80)
        print("UNUSED SETTINGS (declared but not referenced):")
        print("-" * 80)
        for name in sorted(unused):
            print(f"  - {name}")

    if broken_aliases:
        print("\n" + "-" * 80)
        print("BROKEN --config ALIASES:")
        print("-" * 80)
        for alias, target in sorted(broken_aliases.items()):
            print(f"  - {alias} -> {target}")

    print("\n" + "=" * 80)


def main() -> int:
    """Runs the audit; the exit status is 1 if any reference or alias is dangling."""
    print("Scanning codebase for settings usage...")
    tree = _config_tree()
    declared = extract_declared_settings(tree)
    aliases = extract_alias_targets(tree)
    used = find_settings_usage()

    missing = set(used) - declared
    unused = declared - set(used)
    broken_aliases = {alias: target for alias, target in aliases.items() if target not in declared}

    print_report(declared, used, missing, unused, broken_aliases)
    return 1 if missing or broken_aliases else 0


if __name__ == "__main__":
    sys.exit(main())
