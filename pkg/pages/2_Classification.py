import streamlit as st

from pseudoquandle_app.bootstrap import initialize_application
from pseudoquandle_app.classification import (
    classify_abelian,
    primary_decomposition,
    theorem1_applies,
    verify_coprime_splitting,
)
from pseudoquandle_app.errors import PseudoquandleError, TheoremViolation
from pseudoquandle_app.matrix import matrix_of, matrix_to_frame
from pseudoquandle_app.reports import render_classification_text
from pseudoquandle_app.theme import apply_theme
from pseudoquandle_app.ui import init_session_state, render_nav, session_limits, show_error

initialize_application()
apply_theme()
init_session_state()

st.title("Classification")
st.caption("Normal form of P_G for finitely generated abelian groups")
render_nav(current="classification")

with st.form("classify_form"):
    spec = st.text_input("Abelian group (e.g. Z12, Z8xZ9, ZxZ4)", value=st.session_state["abelian_spec"])
    bound = st.number_input("Gcd segment bound N", min_value=1, max_value=60, value=int(st.session_state["bound"]))
    submitted = st.form_submit_button("Classify")

if submitted:
    st.session_state["abelian_spec"] = spec.strip()
    st.session_state["bound"] = int(bound)

spec = st.session_state["abelian_spec"]
limits = session_limits()
try:
    decomposition = primary_decomposition(spec)
    st.write(f"Primary decomposition: `{decomposition.as_dict()}`")
    result = classify_abelian(spec, st.session_state["bound"], limits)
except TheoremViolation as exc:
    st.warning(str(exc))
    if not theorem1_applies(spec):
        st.info("A prime repeats in the decomposition; checking the Sylow splitting instead.")
        try:
            witness = verify_coprime_splitting(spec, limits)
            st.success(f"P_G splits over Sylow components (witness verified: {witness.verified}).")
        except PseudoquandleError as split_exc:
            show_error(split_exc)
    st.stop()
except PseudoquandleError as exc:
    show_error(exc)
    st.stop()

st.code(render_classification_text(result), language="text")
columns = st.columns(2)
with columns[0]:
    st.markdown("#### Computed")
    st.dataframe(matrix_to_frame(matrix_of(result.computed), result.computed.labels), use_container_width=True)
with columns[1]:
    st.markdown(f"#### {result.structure.name}")
    st.dataframe(
        matrix_to_frame(matrix_of(result.structure.realized), result.structure.realized.labels),
        use_container_width=True,
    )
