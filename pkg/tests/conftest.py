from hypothesis import settings

# les arbres de dépliage grossissent vite : pas de limite de durée par exemple
settings.register_profile("wl_unfolding", deadline=None, max_examples=60)
settings.load_profile("wl_unfolding")
