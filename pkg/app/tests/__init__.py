# Tests for the fvf verifier
