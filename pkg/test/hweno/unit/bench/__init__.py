# Copyright hweno-solver contributors. All Rights Reserved.
