pub use mermin_core;
