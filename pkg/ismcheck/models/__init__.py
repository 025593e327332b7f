"""Case-study models: an ATM and a stop-and-wait ARQ sender"""
