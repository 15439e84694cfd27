#include <parastichy/cli.hpp>

int main(int argc, char** argv) { return parastichy::run_cli(argc, argv); }
