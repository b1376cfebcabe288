import hypothesis

# statistical helpers inside properties can be slow on loaded CI boxes;
# determinism comes from seeds, not from wall-clock deadlines
hypothesis.settings.register_profile("intertwine", deadline=None)
hypothesis.settings.load_profile("intertwine")
