# Resource caps
DEFAULT_MEMORY_CAP = 2 * 1024**3
DEFAULT_ENUMERATION_CAP = 10**7
DEFAULT_RANK_CAP = 4096
DENSE_ENTRY_CAP = 2**24

# relative tolerance for recognizing two kernel terms as cancelling copies of each other
PAIRING_TOLERANCE = 1e-6

# N-body grids are never auto-selected below this many points per axis
MIN_AUTO_POINTS = 8

# dt * max|W| must stay below this
POTENTIAL_PHASE_LIMIT = 0.1

# localized potentials must drop below this fraction of their maximum at distance L/2
POTENTIAL_DECAY_TOLERANCE = 1e-8

# a "bounded" verdict needs the observed sup to change less than this under doubling
STABILITY_THRESHOLD = 0.1

# hex digits of sha256 kept for field checksums
CHECKSUM_LENGTH = 16

# experiment anchors written into every artifact header
EXPERIMENT_ANCHORS = {
    "nls": "quintic NLS Strang integration",
    "nbody-converge": "mean-field convergence of marginals",
    "duhamel-residual": "integral GP hierarchy, factorized solution",
    "boardgame": "echelon count and collapse-map domains",
    "bounds": "Sobolev contraction bounds and mollifier estimate",
    "commutation": "acceptable-move commutation identity",
}
