import csv
import io

from django.utils.encoding import force_bytes, force_str


class Table(object):
    """A titled grid of text cells with an optional note printed under it."""

    def __init__(self, title, header, rows, note=None):
        self.title = title
        self.header = [str(h) for h in header]
        self.rows = [[str(cell) for cell in row] for row in rows]
        self.note = note
        for row in self.rows:
            if len(row) != len(self.header):
                raise AssertionError("row %r does not match header %r" % (row, self.header))

    def __repr__(self):
        return "Table(%r, %d rows)" % (self.title, len(self.rows))


class _TableRenderer(object):
    """Base class for text table renderers."""
    media_type = None
    format = None
    charset = 'utf-8'

    def render(self, tables):
        """Render one table or a list of tables.

        :param tables: :class:`Table` or list of them
        :rtype: bytes
        """
        if isinstance(tables, Table):
            tables = [tables]
        return force_bytes(self.render_text(tables), encoding=self.charset)

    def render_text(self, tables):
        raise NotImplementedError("override this method")


class MarkdownTableRenderer(_TableRenderer):
    """Renders pipe tables, each under a ``###`` heading and separated by a blank line."""
    media_type = 'text/markdown'
    format = 'markdown'

    @staticmethod
    def _line(cells):
        return '| ' + ' | '.join(cell.replace('|', '\\|') for cell in cells) + ' |\n'

    def render_table(self, table):
        out = '### %s\n\n' % table.title
        out += self._line(table.header)
        out += self._line(['---'] * len(table.header))
        for row in table.rows:
            out += self._line(row)
        if table.note:
            out += '\n_%s_\n' % table.note
        return out

    def render_text(self, tables):
        return '\n'.join(self.render_table(table) for table in tables)


class CsvTableRenderer(_TableRenderer):
    """Renders comma separated values; several tables are separated by a blank line and a ``# title`` comment."""
    media_type = 'text/csv'
    format = 'csv'

    def render_text(self, tables):
        out = io.StringIO()
        for index, table in enumerate(tables):
            if len(tables) > 1:
                if index:
                    out.write('\n')
                out.write('# %s\n' % table.title)
            writer = csv.writer(out, lineterminator='\n')
            writer.writerow(table.header)
            writer.writerows(table.rows)
        return out.getvalue()


TABLE_RENDERERS = {
    MarkdownTableRenderer.format: MarkdownTableRenderer,
    CsvTableRenderer.format: CsvTableRenderer,
}


def render_text(tables, fmt='markdown'):
    """Render tables to text with the renderer registered for ``fmt``."""
    return force_str(TABLE_RENDERERS[fmt]().render(tables))
