fn main() {
    // Subcommands arrive once the core modules are in place.
}
