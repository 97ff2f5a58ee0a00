#include "cli_app.hpp"

int main(int argc, char** argv) { return pparabolic::cli::main(argc, argv); }
