DEFAULT_SETTINGS = {
    "verbose": True,
    "seed": 0,
    "zero_test_trials": 8,
    "sample_bound": 10**6,
    "sample_draws": 1000,
    "character_trials": 32,
    "character_patience": 8,
    "direction_bound": 10,
    "rank_samples": 5,
    "check_samples": 50,
    "check_bound": 9,
    "max_nodes": 10**5,
    "closure_margin": 1,
}
