from orthologic.cli import main

main()
