from __future__ import annotations

import streamlit as st

from pseudoquandle_app.config import BASE_DIR

STYLE_FILE = BASE_DIR / "style.css"

# Operation tables are wide; monospace cells keep matrix columns aligned.
BASE_STYLE = """
section[data-testid="stSidebar"] { display: none !important; }
[data-testid="collapsedControl"] { display: none !important; }
.main .block-container { max-width: 1280px; padding: 1rem 1rem 2rem 1rem; }
[data-testid="stDataFrame"] div[role="gridcell"] { font-family: ui-monospace, monospace; }
pre, code { font-size: 0.9rem; }
"""


@st.cache_data
def _style_text(path: str) -> str:
    try:
        return BASE_STYLE + open(path, encoding="utf-8").read()
    except OSError:
        return BASE_STYLE


def apply_theme() -> None:
    """Inject the workbench CSS, extended by ``style.css`` at the repo root when present."""
    st.markdown(f"<style>{_style_text(str(STYLE_FILE))}</style>", unsafe_allow_html=True)
