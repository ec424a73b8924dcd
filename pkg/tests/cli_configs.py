"""A fixed argv set touching every CLI subcommand.

Sizes are chosen so range scans span several chunks.
"""

CONFIGS = [
    ["preimage", "--fn", "phi", "--n", "720"],
    ["preimage", "--fn", "ps", "--n", "240", "--levels"],
    ["count", "--fn", "pp", "--from", "1", "--to", "300"],
    ["moments", "rough", "--x", "1e6", "--eta", "0.5", "--fn", "phi"],
    ["moments", "rough", "--x", "6e5", "--fn", "sigma", "--A", "2", "--z", "7"],
    ["moments", "total", "--x", "1e6", "--B", "1.2", "--variant", "quarter", "--fn", "sigma"],
    ["moments", "total", "--x", "7e5", "--B", "1.1", "--variant", "third", "--fn", "phi"],
    ["smooth", "psi", "--x", "1e6", "--y", "100"],
    ["smooth", "pishift", "--x", "1e6", "--y", "50"],
    ["smooth", "phik", "--x", "6e5", "--y", "30", "--k", "2"],
    ["smooth", "hyp1", "--x", "1e6", "--y", "1000"],
    ["partition", "--fn", "sigma", "--inner", "pp", "--n", "1152", "--alpha", "0.7", "--eta", "0.4"],
    ["scan", "theorem1", "--fn", "sp", "--beta", "0.3", "--from", "16", "--to", "400"],
    ["bounds", "lemma3", "--from", "1", "--to", "1000000"],
    ["bounds", "lemma4", "--fn", "sigma", "--d", "12", "--x", "1e6"],
    ["sieve", "build", "--limit", "300000", "--out", "{tmp}/sieve.spf"],
]


def argv_for(cfg, tmp, *extra):
    return [a.replace("{tmp}", str(tmp)) for a in cfg] + list(extra)
