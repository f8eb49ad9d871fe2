import pandas as pd
import streamlit as st

from pseudoquandle_app.bootstrap import initialize_application
from pseudoquandle_app.config import SUPPORTED_FAMILIES
from pseudoquandle_app.documents import dump_json
from pseudoquandle_app.errors import NoChain, PseudoquandleError
from pseudoquandle_app.kernels import class_equation, detect_chain, kernel_table, verify_properties
from pseudoquandle_app.matrix import matrix_of, matrix_report, matrix_to_frame
from pseudoquandle_app.pseudoquandle import build_source, check_axioms
from pseudoquandle_app.reports import render_axioms_text, subscript_set
from pseudoquandle_app.theme import apply_theme
from pseudoquandle_app.ui import init_session_state, render_nav, session_limits, show_error

initialize_application()
apply_theme()
init_session_state()

st.title("Pseudoquandle Workbench")
st.caption("Build a finite magma and check axioms, matrix and kernels")
render_nav(current="workbench")

with st.form("source_form"):
    source = st.text_input(
        "Source",
        value=st.session_state["source"],
        help="Families: " + ", ".join(f"{family}:..." for family in SUPPORTED_FAMILIES),
    )
    submitted = st.form_submit_button("Build")

if submitted:
    st.session_state["source"] = source.strip()

try:
    magma = build_source(st.session_state["source"], session_limits())
except PseudoquandleError as exc:
    show_error(exc)
    st.stop()

axioms = check_axioms(magma)
metrics = st.columns(3)
metrics[0].metric("Elements", magma.size)
metrics[1].metric("Classification", axioms.classification)
metrics[2].metric("Commutative", "yes" if axioms.commutative.holds else "no")
st.code(render_axioms_text(magma, axioms), language="text")

st.markdown("### Matrix")
matrix = matrix_of(magma)
report = matrix_report(matrix)
st.dataframe(matrix_to_frame(matrix, magma.labels), use_container_width=True)
st.write(
    f"symmetric: `{report.symmetric}` | trace: `{report.trace}` (expected `{report.expected_trace}`)"
    f" | simple form: `{report.simple_form}`"
)

st.markdown("### Kernels")
kt = kernel_table(magma)
st.dataframe(
    pd.DataFrame(
        [
            {"element": f"x{p + 1}", "label": magma.labels[p], "ker": subscript_set(kt.ker(p)), "coker": subscript_set(kt.coker(p))}
            for p in range(kt.size)
        ]
    ),
    use_container_width=True,
)
chain = detect_chain(kt)
if chain.chain_found:
    try:
        st.success(f"Class equation: {class_equation(magma).render()}")
    except NoChain as exc:
        st.info(str(exc))
else:
    st.info("No ascending chain of kernels.")

with st.expander("Kernel claims"):
    properties = verify_properties(magma)
    st.dataframe(pd.DataFrame([check.as_dict() for check in properties.checks]), use_container_width=True)
    if properties.ok:
        st.success(f"All asserted claims hold (tier: {properties.tier}).")
    else:
        st.error("Asserted claims failed.")

st.download_button(
    "Download magma document (JSON)",
    data=dump_json(magma.to_document(), indent=2),
    file_name="magma.json",
    mime="application/json",
)
