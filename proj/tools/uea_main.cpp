int uea_cli_main(int argc, char** argv);

int main(int argc, char** argv) { return uea_cli_main(argc, argv); }
