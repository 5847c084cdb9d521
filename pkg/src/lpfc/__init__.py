"""LP decoding of LDPC codes with frustrated-cycle tightening."""
