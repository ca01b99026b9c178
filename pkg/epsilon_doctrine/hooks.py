app_name = "epsilon_doctrine"
app_title = "Epsilon Doctrine"
app_publisher = "AgriTheory"
app_description = "Proof kernel for the typed Epsilon calculus with a finite-set Epsilon doctrine"
app_email = "support@agritheory.dev"
app_license = "MIT"

# Law Verifiers
# -------------
# Run in order by the `laws` subcommand; each takes (max_size, seed) and yields LawVerdicts.

law_verifiers = [
	"epsilon_doctrine.laws.verify_fiber_boolean_algebra",
	"epsilon_doctrine.laws.verify_reindex_homomorphism",
	"epsilon_doctrine.laws.verify_reindex_functoriality",
	"epsilon_doctrine.laws.verify_sigma_adjunction",
	"epsilon_doctrine.laws.verify_beck_chevalley",
	"epsilon_doctrine.laws.verify_epsilon_oracle",
	"epsilon_doctrine.laws.verify_epsilon_inequality",
	"epsilon_doctrine.laws.verify_image_factorization",
	"epsilon_doctrine.laws.verify_pullback_stability",
	"epsilon_doctrine.laws.verify_lem_coproduct",
	"epsilon_doctrine.laws.verify_choice",
]

# Corpus
# ------

corpus_theory = "corpus/basic.eps"
corpus_proofs = "corpus/proofs"
corpus_models = "corpus/models"

# Run Config
# ----------

run_config_schema = "config/run_config.json"
