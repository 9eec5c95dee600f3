# Tests for page_cce
