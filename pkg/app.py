import streamlit as st

from pseudoquandle_app.bootstrap import initialize_application
from pseudoquandle_app.theme import apply_theme
from pseudoquandle_app.ui import init_session_state

st.set_page_config(page_title="Pseudoquandle Workbench", page_icon=":material/grid_on:", layout="wide")

initialize_application()
apply_theme()
init_session_state()

# Landing route goes directly to the workbench.
st.switch_page("pages/1_Workbench.py")
