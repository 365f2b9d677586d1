"""The dialog state machine: recognize, confirm, browse, navigate, and
the ask-again path on a simulated misrecognition."""

from bolkhoj.recognizer import ConfusionModel
from bolkhoj.resources import default_data_dir, load_default_resources
from bolkhoj.search import load_documents, load_templates
from bolkhoj.session import ErrorSimulation, SessionConfig, SessionEngine

bundle = load_default_resources()
docs = load_documents(default_data_dir() / "docs.jsonl")
templates = load_templates(default_data_dir() / "templates.tsv")

engine = SessionEngine(bundle, docs, templates)
session = engine.create_session()

engine.submit_query(session, text="aaj dili ki mandi mein aalu ka bhav kya hai")
print("state:", session.state)                 # recognized, confidence 1.0
engine.confirm(session)
snap = engine.get_state(session)
print("state:", snap["state"])
print("answer:", snap["answer"]["hindi"])
print("links:", [(l["number"], l["text"]) for l in snap["links"]])

engine.select_link(session, 2)                  # follow badge number 2
print("navigated to:", engine.get_state(session)["page"])

# a session configured with a confusion model retries on injected errors
sim = ErrorSimulation(ConfusionModel({"dili": {"bili": 1.0}}, {}), seed=42)
noisy = SessionEngine(bundle, docs, templates,
                      config=SessionConfig(error_simulation=sim))
s2 = noisy.create_session()
noisy.submit_query(s2, text="aaj dili ki mandi mein aalu ka bhav kya hai")
print()
print("with injected dili->bili:", s2.state)    # ask_again
print("message:", noisy.get_state(s2)["message"])
