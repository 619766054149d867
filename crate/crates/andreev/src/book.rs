//! Binds the guide chapters as doc-tests; chapters are added as they are written.
