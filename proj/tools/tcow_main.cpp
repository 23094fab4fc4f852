#include "tcow/cli.hpp"

int main(int argc, char** argv) { return tcow::cli::run(argc, argv); }
