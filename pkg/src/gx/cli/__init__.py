"""Terminal rendering for the gx command line."""
