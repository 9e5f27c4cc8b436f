from pathlib import Path

ANDROID = 'xmlns:android="http://schemas.android.com/apk/res/android"'


def write_tree(root: Path, files: dict[str, str | bytes]) -> Path:
    for rel, content in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content)
    return root


def values(body: str) -> str:
    return f'<?xml version="1.0" encoding="utf-8"?>\n<resources>\n{body}</resources>\n'


def layout(body: str) -> str:
    return f'<?xml version="1.0" encoding="utf-8"?>\n<LinearLayout {ANDROID}>\n{body}</LinearLayout>\n'
