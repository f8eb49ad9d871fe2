import streamlit as st

from pseudoquandle_app.bootstrap import initialize_application
from pseudoquandle_app.corpus import corpus_frame, run_corpus
from pseudoquandle_app.theme import apply_theme
from pseudoquandle_app.ui import init_session_state, render_nav, session_limits

initialize_application()
apply_theme()
init_session_state()

st.title("Corpus")
st.caption("Every built-in group and structure, checked exhaustively")
render_nav(current="corpus")

jobs = st.slider("Worker threads", min_value=1, max_value=8, value=4)
if st.button("Run corpus"):
    with st.spinner("Checking corpus..."):
        st.session_state["corpus_rows"] = run_corpus(session_limits(), jobs=jobs)

rows = st.session_state["corpus_rows"]
if rows is None:
    st.info("Corpus has not been run in this session.")
else:
    failed = [row for row in rows if not row.ok]
    if failed:
        st.error(f"{len(failed)} of {len(rows)} items failed.")
    else:
        st.success(f"All {len(rows)} items passed.")
    st.dataframe(corpus_frame(rows), use_container_width=True)
