#include "neron/io.hpp"

int main(int argc, char** argv) { return neron::run_cli(argc, argv); }
