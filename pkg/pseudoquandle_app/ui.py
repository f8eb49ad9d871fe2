from __future__ import annotations

import streamlit as st

from pseudoquandle_app.config import Limits, default_gcd_bound

PAGES = (
    ("Workbench", "pages/1_Workbench.py", "workbench"),
    ("Classification", "pages/2_Classification.py", "classification"),
    ("Corpus", "pages/3_Corpus.py", "corpus"),
)


def init_session_state() -> None:
    st.session_state.setdefault("source", "pg:Q8")
    st.session_state.setdefault("abelian_spec", "Z12")
    st.session_state.setdefault("bound", default_gcd_bound())
    st.session_state.setdefault("corpus_rows", None)


def session_limits() -> Limits:
    return Limits.from_env()


def render_nav(current: str = "") -> None:
    nav = st.columns(len(PAGES))
    for column, (title, path, key) in zip(nav, PAGES):
        with column:
            if st.button(title, key=f"nav_{key}_{current}", disabled=key == current):
                st.switch_page(path)


def show_error(exc: Exception) -> None:
    st.error(f"{type(exc).__name__}: {exc}")
