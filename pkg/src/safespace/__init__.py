"""SafeSpace: digital safety and well-being toolkit.

Library surface: toxicity analysis (safespace.toxicity), check-in safety
pings (safespace.safety_ping), alert dispatch (safespace.alerts), the
questionnaire engine (safespace.questionnaire), persistence
(safespace.store), the HTTP service (safespace.service), and the
reliability simulator (safespace.sim).
"""

__version__ = "0.1.0"
