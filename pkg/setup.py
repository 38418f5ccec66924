from setuptools import setup, find_packages

# Read contents of README file
from pathlib import Path
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text()

setup(
    name='rcpsp_ga',
    version='0.1.0',
    description='Genetic algorithm for resource-constrained project scheduling with unit allocation policies.',
    long_description=long_description,
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=['tests', 'tests.*']),
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.9',
    install_requires=[
        'click',
        'jsonschema',
        'networkx',
        'numpy',
        'pandas>=1.5',
        'psutil',
        'python-dotenv',
    ],
    extras_require={
        'dev': [
            'pytest',
            'flake8',
        ],
    },
    entry_points={
        'console_scripts': [
            'rcpsp-ga=rcpsp_ga.cli:main',
        ],
    },
)
