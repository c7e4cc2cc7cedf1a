from quintlab.cli import main

raise SystemExit(main())
