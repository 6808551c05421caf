"""Lab reconstruction of the LC-MUME certificateless multi-user matchmaking
encryption scheme, a Type-I key-replacement forgery against it, and an
instrumented operation-count / scaling benchmark."""

from .attack import (
    ExperimentReport,
    KeyRegistry,
    ReplacedSenderKey,
    forge_ciphertext,
    replace_sender_key,
    run_euf_cma_experiment,
)
from .bench import OpReport, TimingRow, emit_table, linear_fit, measure_attack, predicted_ops
from .group import (
    GroupParams,
    OpCounter,
    field_add,
    field_mul,
    group_by_name,
    map_to_scalar,
    point_add,
    point_mul,
    point_neg,
    point_sub,
    production_group,
    scalar_random,
    toy_group,
)
from .oracles import HashSuite, hash_to_root, mask_hash, pair_hash, partial_key_hash, tag_hash
from .polyring import MonicPoly
from .scheme import (
    Ciphertext,
    MasterSecret,
    ReceiverSet,
    SystemParams,
    UserKeyPair,
    decrypt,
    encrypt,
    setup,
    split_and_mask,
    unmask,
    user_keygen,
)

__version__ = "0.1.0"
