"""Rate-one four-group decodable space-time block codes.

Construction, ML decoding, pairwise error probability analysis, rotation
design, and seeded Monte Carlo BER simulation for the 8-antenna
quasi-orthogonal family and the circulant-block (semi-orthogonal) family.
"""

from .analysis import (DiversityDeficientError, PepQuery, conditional_pep,
                       diversity_slope, papr, pep_asymptotic_qstbc,
                       pep_asymptotic_sast, pep_exact_qstbc, pep_exact_sast,
                       worst_case_pep)
from .channel import sample_channel, snr_db_to_linear, transmit
from .codebook import (DispersionCode, alamouti, code_info, delete_columns,
                       dispersion_from_pairs, double_code, mdc_qstbc_4,
                       qstbc_6, qstbc_8, qstbc_8_permuted, sast_4gp_code,
                       sast_code, sast_encode, verify_group_decodable)
from .codebook import by_name as code_by_name
from .constellation import (Constellation, bits_to_symbols, make_8qam_rect,
                            make_8qam_s, make_qam, symbols_to_bits)
from .constellation import by_name as constellation_by_name
from .detector import (DetectionFailureError, DetectionResult,
                       EquivalentChannel, joint_ml_oracle, qstbc8_detect,
                       qstbc8_equivalent_channel, sast_2gp_detect,
                       sast_4gp_detect, sast_equivalent_channel,
                       sphere_detect)
from .harness import (BerRecord, ConfigError, SimConfig, run_ber, run_pep,
                      run_verify, write_csv)
from .rotation import (combined_rotation_qstbc, combined_rotation_sast,
                       default_rotation, group_difference_set, load_rotation,
                       optimize_rotation, product_distance,
                       qstbc_group_difference_set, save_rotation)

__version__ = "0.1.0"
