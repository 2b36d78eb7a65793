"""XOR-homomorphic identity-based encryption from quadratic residuosity."""
from .anonymizer import (
    AnonCiphertext,
    AnonParams,
    AttributeTag,
    anon_decrypt,
    anon_encrypt,
    anon_eval,
    anon_params,
    anonymize,
    attribute_tag,
    deanonymize,
)
from .cocks import CocksCiphertext, IdentityKey, cocks_decrypt, cocks_encrypt, cocks_keygen, cocks_setup
from .errors import AccessDenied, FormatError, IterationCapExceeded, MalformedCiphertext, QHIBEError
from .numtheory import MasterSecret, PublicParams, gen_blum_modulus, hash_to_group, jacobi
from .qring import RingCtx, RingElement
from .xhibe import (
    Ciphertext,
    XorCircuit,
    xh_combine,
    xh_decrypt,
    xh_encrypt,
    xh_eval,
    xh_is_valid,
    xh_rerandomize,
)

__version__ = "0.1.0"
